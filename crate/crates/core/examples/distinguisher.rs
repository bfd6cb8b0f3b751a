// SPDX-License-Identifier: Apache-2.0

//! A `K^t` oracle breaks the builtin generator: one row per truncation.

use ktlab::distinguisher::{distinguisher_row, eq1_census, eq2_census, DistinguisherParams, ExactKt};
use ktlab::kolmogorov::KtCensus;
use ktlab::tinyvm::expander_id;

fn main() -> ktlab::Result<()> {
    let (n, gamma, t) = (4, 8, 64);
    let census = KtCensus::build(t, DistinguisherParams::new(n, gamma, 0, 1)?.m)?;
    let oracle = ExactKt(&census);
    println!(" c   m  thr   Pr[D(U)=1]   Pr[D(G)=1]  advantage");
    for c in 0..=3 {
        let p = DistinguisherParams::new(n, gamma, c, 1)?;
        let row = distinguisher_row(&p, &oracle)?;
        println!(
            "{c:2} {:3} {:4} {:>12.6} {:>12.6} {:>10.6}",
            p.m,
            p.threshold,
            ktlab::stats::rational_to_f64(&row.acceptance_uniform),
            ktlab::stats::rational_to_f64(&row.acceptance_prg),
            ktlab::stats::rational_to_f64(&row.advantage),
        );
    }

    let eq1 = eq1_census(n, t, gamma, 0)?;
    println!("Pr[K^t(x) >= {}] = {} on {{0,1}}^{} (need >= {:.4})", eq1.threshold, eq1.fraction, eq1.m, eq1.bound);
    let eq2 = eq2_census(expander_id(gamma, 0)?, 8, t, gamma as i32)?;
    println!("|s| = 8: max K^t(G(s)) = {:?}, threshold {}, holds = {}", eq2.max_kt, eq2.threshold, eq2.holds);
    Ok(())
}
