// SPDX-License-Identifier: Apache-2.0

//! The affine universal hash family `h_{a,b}(x) = a·x + b` over GF(2^n),
//! truncation, and exact Leftover-Hash-Lemma checks.

use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stats::{le_scaled_inverse_power, rational, ExactDistribution, Rational};

/// Largest field degree with a pinned modulus.
pub const MAX_FIELD_BITS: usize = 16;

/// Checked-in modulus table, one `n: hex` line per degree.
pub const MODULUS_TABLE: &str = include_str!("../data/irreducible.txt");

fn parse_modulus_table(text: &str) -> Result<Vec<u32>> {
    let mut moduli = vec![0u32; MAX_FIELD_BITS + 1];
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (n, hex) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("modulus line {line:?}")))?;
        let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("degree in {line:?}")))?;
        let m = u32::from_str_radix(hex.trim(), 16).map_err(|_| Error::Parse(format!("mask in {line:?}")))?;
        if n == 0 || n > MAX_FIELD_BITS || m >> n != 1 {
            return Err(Error::Parse(format!("modulus {m:#x} is not of degree {n}")));
        }
        moduli[n] = m;
    }
    Ok(moduli)
}

fn moduli() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| parse_modulus_table(MODULUS_TABLE).expect("shipped modulus table parses"))
}

/// The pinned modulus for GF(2^n), as a coefficient bitmask including `x^n`.
pub fn modulus(n: usize) -> Result<u32> {
    match moduli().get(n) {
        Some(&m) if m != 0 => Ok(m),
        _ => Err(Error::InvalidParams(format!("no pinned modulus for GF(2^{n})"))),
    }
}

/// Multiplication in GF(2^n) with elements as `n`-bit integers.
#[inline]
pub fn gf_mul(a: u32, b: u32, n: usize, modulus: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> n & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

/// A member of the family: `2n` bits, `a` then `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HashSeed {
    pub a: u32,
    pub b: u32,
    pub n: usize,
}

impl HashSeed {
    pub fn new(a: u32, b: u32, n: usize) -> Result<Self> {
        modulus(n)?;
        if u64::from(a) >> n != 0 || u64::from(b) >> n != 0 {
            return Err(Error::InvalidParams(format!("seed elements exceed {n} bits")));
        }
        Ok(Self { a, b, n })
    }

    pub fn from_bits(bits: &BitString) -> Result<Self> {
        if !bits.len().is_multiple_of(2) || bits.is_empty() {
            return Err(Error::InvalidParams(format!("hash seed of odd length {}", bits.len())));
        }
        let n = bits.len() / 2;
        Self::new(bits.slice(0, n).to_u64() as u32, bits.slice(n, 2 * n).to_u64() as u32, n)
    }

    pub fn to_bits(&self) -> BitString {
        let mut out = BitString::from_u64(u64::from(self.a), self.n);
        out.push_u64(u64::from(self.b), self.n);
        out
    }

    /// All `2^{2n}` seeds, `a` major.
    pub fn all(n: usize) -> Result<impl Iterator<Item = HashSeed>> {
        modulus(n)?;
        Ok((0..1u32 << n).flat_map(move |a| (0..1u32 << n).map(move |b| HashSeed { a, b, n })))
    }

    #[inline]
    pub fn apply_u32(&self, x: u32) -> u32 {
        gf_mul(self.a, x, self.n, moduli()[self.n]) ^ self.b
    }
}

/// `a·x + b` in GF(2^n).
pub fn hash(seed: &HashSeed, x: &BitString) -> Result<BitString> {
    if x.len() != seed.n {
        return Err(Error::LengthMismatch { expected: seed.n, actual: x.len() });
    }
    Ok(BitString::from_u64(u64::from(seed.apply_u32(x.to_u64() as u32)), seed.n))
}

/// `[y]_j`: the first `j` bits of `y`.
pub fn truncate(y: &BitString, j: usize) -> Result<BitString> {
    if j > y.len() {
        return Err(Error::InvalidParams(format!("cannot truncate {} bits to {j}", y.len())));
    }
    Ok(y.prefix(j))
}

/// Top `j` bits of an `n`-bit value.
#[inline]
pub fn truncate_u32(y: u32, n: usize, j: usize) -> u32 {
    if j == 0 {
        0
    } else {
        y >> (n - j)
    }
}

#[derive(Clone, Debug)]
pub struct PairwiseCensus {
    pub n: usize,
    pub j: usize,
    /// Seeds per (x, x′, y, y′) cell; constant `2^{2n−2j}` for a universal family.
    pub min_count: u64,
    pub max_count: u64,
    /// The common cell probability when `min_count == max_count`.
    pub probability: Option<Rational>,
}

impl PairwiseCensus {
    pub fn is_universal(&self) -> bool {
        self.probability == Some(Rational::new(BigInt::from(1u8), BigInt::from(1u64) << (2 * self.j)))
    }
}

/// Counts, over all `2^{2n}` seeds, how often `([h(x)]_j, [h(x′)]_j) = (y, y′)`
/// for every `x ≠ x′` and every `y, y′`.
pub fn pairwise_census(n: usize, j: usize) -> Result<PairwiseCensus> {
    if j > n {
        return Err(Error::InvalidParams(format!("truncation {j} > {n}")));
    }
    if n > 5 {
        return Err(Error::BudgetExceeded(format!("pairwise census at n = {n}")));
    }
    let seeds: Vec<HashSeed> = HashSeed::all(n)?.collect();
    let size = 1usize << n;
    let cells = 1usize << (2 * j);
    let mut min_count = u64::MAX;
    let mut max_count = 0;
    for x in 0..size as u32 {
        for x2 in (0..size as u32).filter(|&v| v != x) {
            let mut counts = vec![0u64; cells];
            for s in &seeds {
                let y = truncate_u32(s.apply_u32(x), n, j) as usize;
                let y2 = truncate_u32(s.apply_u32(x2), n, j) as usize;
                counts[(y << j) | y2] += 1;
            }
            min_count = min_count.min(*counts.iter().min().expect("cells"));
            max_count = max_count.max(*counts.iter().max().expect("cells"));
        }
    }
    let probability = (min_count == max_count).then(|| rational(min_count as i64, seeds.len() as i64));
    Ok(PairwiseCensus { n, j, min_count, max_count, probability })
}

#[derive(Clone, Debug)]
pub struct LhlVerdict {
    /// Exact `SD((H, [H(X)]_{k−d}), (H, U_{k−d}))`.
    pub measured_sd: Rational,
    pub d: usize,
    /// `2^{−d/2}` for display; the verdict itself is decided exactly.
    pub bound: f64,
    pub holds: bool,
}

/// Largest `n` for which [`lhl_check`] enumerates all `2^{2n}` seeds.
pub const LHL_MAX_BITS: usize = 10;

/// Exact Leftover-Hash-Lemma check for a source of declared min-entropy `k`
/// hashed down to `out_bits = k − d` bits.
pub fn lhl_check(x: &ExactDistribution, k: usize, out_bits: usize) -> Result<LhlVerdict> {
    let n = x.outcome_bits();
    if n == 0 || n > LHL_MAX_BITS {
        return Err(Error::BudgetExceeded(format!("LHL enumeration needs 1 <= n <= {LHL_MAX_BITS}, got {n}")));
    }
    if out_bits > k || k > n {
        return Err(Error::InvalidParams(format!("need out_bits <= k <= n, got {out_bits}, {k}, {n}")));
    }
    // H∞(X) ≥ k  ⇔  max_weight · 2^k ≤ total
    if BigInt::from(x.max_weight()) << k > BigInt::from(x.total()) {
        return Err(Error::InvalidParams(format!("source min-entropy is below the declared k = {k}")));
    }
    let d = k - out_bits;
    let points: Vec<(u32, u128)> = x.iter().map(|(v, w)| (v.to_u64() as u32, w)).collect();
    let total = x.total();
    let cells = 1usize << out_bits;
    let m = modulus(n)?;
    // Per seed: Σ_y |w_y·2^j − T|, summed over all seeds.
    let numerator: BigInt = (0..1u32 << n)
        .into_par_iter()
        .map(|a| {
            let mut acc = BigInt::from(0u8);
            let mut counts = vec![0u128; cells];
            for b in 0..1u32 << n {
                counts.iter_mut().for_each(|c| *c = 0);
                for &(v, w) in &points {
                    let y = gf_mul(a, v, n, m) ^ b;
                    counts[truncate_u32(y, n, out_bits) as usize] += w;
                }
                for &c in &counts {
                    let scaled = c * cells as u128;
                    acc += BigInt::from(scaled.abs_diff(total));
                }
            }
            acc
        })
        .sum();
    let den = BigInt::from(2u8) * BigInt::from(total) * (BigInt::from(1u8) << (2 * n + out_bits));
    let measured_sd = Rational::new(numerator, den);
    let holds = le_scaled_inverse_power(&measured_sd, &rational(1, 1), 2, d as u32, 2);
    Ok(LhlVerdict { measured_sd, d, bound: 2f64.powf(-(d as f64) / 2.0), holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::sd;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Polynomial remainder over GF(2), independent of the field code.
    fn poly_rem(mut a: u64, m: u64) -> u64 {
        let dm = 63 - m.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= dm {
            a ^= m << (63 - a.leading_zeros() - dm);
        }
        a
    }

    #[test]
    fn table_moduli_are_irreducible() {
        for n in 1..=MAX_FIELD_BITS {
            let m = u64::from(modulus(n).unwrap());
            for f in 2u64..(1 << (n / 2 + 1)) {
                let deg = 63 - f.leading_zeros();
                if deg as usize <= n / 2 && deg >= 1 {
                    assert_ne!(poly_rem(m, f), 0, "x-poly {f:#b} divides modulus of degree {n}");
                }
            }
        }
        assert!(modulus(17).is_err());
    }

    #[test]
    fn table_parser_rejects_bad_degree() {
        assert!(parse_modulus_table("4: 11b").is_err());
        assert!(parse_modulus_table("nonsense").is_err());
    }

    #[test]
    fn field_multiplication_has_inverses() {
        for n in 1..=8 {
            let m = modulus(n).unwrap();
            for a in 1..1u32 << n {
                assert!((1..1u32 << n).any(|b| gf_mul(a, b, n, m) == 1), "{a} has no inverse in GF(2^{n})");
            }
        }
    }

    #[test]
    fn identity_and_constant_seeds() {
        for x in BitString::all(4) {
            assert_eq!(hash(&HashSeed::new(1, 0, 4).unwrap(), &x).unwrap(), x);
            assert_eq!(hash(&HashSeed::new(0, 0b1010, 4).unwrap(), &x).unwrap(), BitString::from_u64(0b1010, 4));
        }
        assert!(hash(&HashSeed::new(1, 0, 4).unwrap(), &BitString::zeros(3)).is_err());
    }

    #[test]
    fn seed_serialization() {
        let s = HashSeed::new(0b101, 0b011, 3).unwrap();
        assert_eq!(s.to_bits().to_string(), "101011");
        assert_eq!(HashSeed::from_bits(&s.to_bits()).unwrap(), s);
        assert!(HashSeed::new(8, 0, 3).is_err());
    }

    #[test]
    fn truncation_edges() {
        let y = BitString::parse("1101").unwrap();
        assert_eq!(truncate(&y, 4).unwrap(), y);
        assert_eq!(truncate(&y, 0).unwrap(), BitString::new());
        assert!(truncate(&y, 5).is_err());
    }

    #[test]
    fn pairwise_independence_exhaustive() {
        for n in 1..=4 {
            for j in 0..=n {
                let c = pairwise_census(n, j).unwrap();
                assert!(c.is_universal(), "n = {n}, j = {j}: {c:?}");
                assert_eq!(c.min_count, 1 << (2 * (n - j)));
            }
        }
    }

    #[test]
    fn lhl_point_mass() {
        let x = ExactDistribution::point(BitString::zeros(5));
        let v = lhl_check(&x, 0, 0).unwrap();
        assert_eq!(v.measured_sd, rational(0, 1));
        assert!(v.holds);
    }

    #[test]
    fn lhl_uniform_full_output() {
        // Only the a = 0 seeds are non-uniform: SD = Pr[a=0]·(1 − 2^{-n}).
        let x = ExactDistribution::uniform(4);
        let v = lhl_check(&x, 4, 4).unwrap();
        assert_eq!(v.measured_sd, rational(15, 256));
        assert!(v.holds);
    }

    #[test]
    fn lhl_matches_joint_distribution_oracle() {
        // Build the joint (seed, [h(X)]_j) distribution explicitly and compare
        // its SD to (seed, U_j) against the per-seed computation.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut all: Vec<BitString> = BitString::all(4).collect();
        all.shuffle(&mut rng);
        let x = ExactDistribution::uniform_over(4, all[..8].iter().cloned()).unwrap();
        let (k, j) = (3, 1);
        let joint = ExactDistribution::from_weights(
            8 + j,
            HashSeed::all(4).unwrap().flat_map(|s| {
                x.iter()
                    .map(move |(v, w)| (s.to_bits().concat(&hash(&s, v).unwrap().prefix(j)), w))
                    .collect::<Vec<_>>()
            }),
        )
        .unwrap();
        let ideal = ExactDistribution::uniform(8 + j);
        let v = lhl_check(&x, k, j).unwrap();
        assert_eq!(v.measured_sd, sd(&joint, &ideal).unwrap());
        assert!(v.holds);
    }

    #[test]
    fn lhl_flat_subset_n6() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut all: Vec<BitString> = BitString::all(6).collect();
        all.shuffle(&mut rng);
        let x = ExactDistribution::uniform_over(6, all[..16].iter().cloned()).unwrap();
        let v = lhl_check(&x, 4, 2).unwrap();
        assert!(v.holds);
        assert!(v.measured_sd <= rational(1, 2));
    }

    #[test]
    fn lhl_rejects_low_min_entropy() {
        let x = ExactDistribution::from_weights(
            3,
            [(BitString::zeros(3), 3), (BitString::ones(3), 1)],
        )
        .unwrap();
        assert!(lhl_check(&x, 1, 0).is_err());
        assert!(lhl_check(&ExactDistribution::uniform(11), 1, 0).is_err());
    }

    #[test]
    fn lhl_adversarial_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 5;
        for trial in 0..12 {
            let mut all: Vec<BitString> = BitString::all(n).collect();
            all.shuffle(&mut rng);
            let (x, k) = match trial % 3 {
                0 => (ExactDistribution::point(all[0].clone()), 0),
                1 => (ExactDistribution::uniform_over(n, all[..8].iter().cloned()).unwrap(), 3),
                // two-level: weights 2 and 1, max prob 2/(2·4+8) = 1/8
                _ => (
                    ExactDistribution::from_weights(
                        n,
                        all[..4].iter().map(|v| (v.clone(), 2)).chain(all[4..12].iter().map(|v| (v.clone(), 1))),
                    )
                    .unwrap(),
                    3,
                ),
            };
            for out_bits in 0..=k {
                assert!(lhl_check(&x, k, out_bits).unwrap().holds, "trial {trial} out_bits {out_bits}");
            }
        }
    }
}
