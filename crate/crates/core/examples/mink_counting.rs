// SPDX-License-Identifier: Apache-2.0

//! Few strings are compressible: exact counts of `{x : K^t(x) < k}` against `2^k`,
//! and how often the trivial estimate `|x|` is off by more than `β`.

use ktlab::kolmogorov::{approx_ok, count_with, decide_mink, KtCensus};
use ktlab::BitString;

fn main() -> ktlab::Result<()> {
    let (n, t) = (12, 64);
    let census = KtCensus::build(t, n + 1)?;
    println!("n = {n}, t = {t}");
    for k in 1..=n + 1 {
        let count = count_with(&census, n, k);
        println!("  #{{x : K^t(x) < {k:2}}} = {count:5}   2^k = {}", 1u64 << k);
    }

    let members = BitString::all(n).filter(|x| decide_mink(x, t, n).unwrap_or(false)).count();
    println!("|MINK^t[n] ∩ {{0,1}}^{n}| = {members}");

    let beta = 1;
    let off = BitString::all(n).filter(|x| !approx_ok(n, census.kt(x).map(|r| r.length).unwrap_or(n + 1), beta)).count();
    println!("estimate |x| misses by more than {beta} on {off} of {} strings", 1u64 << n);
    Ok(())
}
