// SPDX-License-Identifier: Apache-2.0

//! Regularity profiles of the shipped toy functions.

use ktlab::prg::{find_regularity, regularity_check, ToyOwf, TOY_OWF_NAMES};

fn main() -> ktlab::Result<()> {
    let n = 10;
    println!("{:>20} {:>3} {:>7} {:>10}", "function", "r", "|S_n|", "weight");
    for name in TOY_OWF_NAMES {
        let f = ToyOwf::by_name(name, n)?;
        let p = find_regularity(&f);
        let v = regularity_check(&f, &p);
        println!("{name:>20} {:>3} {:>7} {:>10}  ok = {}", p.r, p.members.len(), p.weight.to_string(), v.holds());
    }
    Ok(())
}
