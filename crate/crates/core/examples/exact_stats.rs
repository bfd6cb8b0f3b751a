// SPDX-License-Identifier: Apache-2.0

//! Exact distributions: distance, entropies and a CSV dump.

use ktlab::stats::{min_entropy, sd, sd_entropy_lemma_check, sd_to_uniform, shannon_entropy};
use ktlab::{BitString, ExactDistribution};

fn main() -> ktlab::Result<()> {
    // uniform on 4 bits, except 0000 takes a little mass from 1111
    let skewed = ExactDistribution::from_weights(
        4,
        BitString::all(4).map(|x| {
            let w = match x.to_u64() {
                0 => 9,
                15 => 7,
                _ => 8,
            };
            (x, w)
        }),
    )?;
    println!("SD to uniform = {}", sd_to_uniform(&skewed));
    println!("SD to itself = {}", sd(&skewed, &skewed)?);
    println!("H = {:.6}, H_min = {:.6}", shannon_entropy(&skewed), min_entropy(&skewed));
    let v = sd_entropy_lemma_check(&skewed)?;
    println!("premise SD <= 1/n^2: {}, entropy >= n - 2: {}", v.premise, v.holds);
    skewed.write_csv(std::io::stdout().lock())
}
