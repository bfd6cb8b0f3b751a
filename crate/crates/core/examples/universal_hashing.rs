// SPDX-License-Identifier: Apache-2.0

//! Affine hashing over GF(2^n): pairwise independence and the leftover hash lemma.

use ktlab::hashing::{hash, lhl_check, modulus, pairwise_census, truncate, HashSeed};
use ktlab::{BitString, ExactDistribution};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ktlab::Result<()> {
    let n = 6;
    println!("GF(2^{n}) modulus {:#b}", modulus(n)?);
    let seed = HashSeed::new(0b101101, 0b000111, n)?;
    let x = BitString::from_u64(0b110010, n);
    let y = hash(&seed, &x)?;
    println!("h(x) = {y}, truncated to 3 bits: {}", truncate(&y, 3)?);

    for j in 1..=3 {
        let c = pairwise_census(3, j)?;
        let prob = c.probability.as_ref().map_or("varies".into(), |p| p.to_string());
        println!("n = 3, j = {j}: collision probability {prob}, universal = {}", c.is_universal());
    }

    // a flat source of min-entropy 4 hashed to 2 bits
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut all: Vec<BitString> = BitString::all(n).collect();
    all.shuffle(&mut rng);
    let source = ExactDistribution::uniform_over(n, all.into_iter().take(16))?;
    let v = lhl_check(&source, 4, 2)?;
    println!("LHL: SD = {} (≈ {:.4}) vs 2^(-d/2) = {:.4}, holds = {}", v.measured_sd, ktlab::stats::rational_to_f64(&v.measured_sd), v.bound, v.holds);
    Ok(())
}
