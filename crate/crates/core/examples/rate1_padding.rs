// SPDX-License-Identifier: Apache-2.0

//! Rate-1 padding and the all-lengths wrapper.

use ktlab::prg::expander::Expander;
use ktlab::prg::{all_lengths_wrapper, rate1_pad, CondEpPrg, PrgConfig, Rate1Params, ToyOwf};
use ktlab::BitString;

fn main() -> ktlab::Result<()> {
    let split = Rate1Params::new(64, 1, 8)?;
    let inner = Expander::new(8, 0);
    let s: BitString = (0..64).map(|i| i % 5 == 0).collect();
    let out = rate1_pad(&inner, &s, &split)?;
    println!("|s| = 64 split {} + {}: output {} bits (+{})", split.s0_len(), split.s1_len, out.len(), out.len() - 64);

    let family: Vec<CondEpPrg> = [4, 5]
        .into_iter()
        .map(|n| CondEpPrg::build(ToyOwf::by_name("identity", n)?, &PrgConfig::default()))
        .collect::<ktlab::Result<_>>()?;
    for g in &family {
        println!("n = {} takes n' = {} bits", g.params.n, g.params.n_prime);
    }
    let x: BitString = (0..family[0].params.n_prime + 3).map(|i| i % 3 == 1).collect();
    let y = all_lengths_wrapper(family.as_slice(), &x)?;
    println!("input {} bits -> output {} bits, last 3 passed through: {}", x.len(), y.len(), y.slice(y.len() - 3, y.len()));
    Ok(())
}
