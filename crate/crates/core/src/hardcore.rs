// SPDX-License-Identifier: Apache-2.0

//! Goldreich–Levin inner-product hardcore bits.

use num_bigint::BigInt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stats::{ExactDistribution, Rational};

/// `k` vectors, each as long as the hidden input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlSeed {
    vectors: Vec<BitString>,
}

impl GlSeed {
    pub fn new(vectors: Vec<BitString>) -> Result<Self> {
        if let Some(first) = vectors.first() {
            if let Some(bad) = vectors.iter().find(|v| v.len() != first.len()) {
                return Err(Error::LengthMismatch { expected: first.len(), actual: bad.len() });
            }
        }
        Ok(Self { vectors })
    }

    /// Splits a serialized `k·n`-bit seed into `k` rows of `n` bits.
    pub fn from_bits(bits: &BitString, k: usize, n: usize) -> Result<Self> {
        if bits.len() != k * n {
            return Err(Error::LengthMismatch { expected: k * n, actual: bits.len() });
        }
        Ok(Self { vectors: (0..k).map(|j| bits.slice(j * n, (j + 1) * n)).collect() })
    }

    pub fn to_bits(&self) -> BitString {
        let mut out = BitString::new();
        for v in &self.vectors {
            out.extend_from(v);
        }
        out
    }

    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BitString] {
        &self.vectors
    }
}

/// Bit `i` is `⟨x, vectors[i]⟩ mod 2`.
pub fn gl(x: &BitString, seed: &GlSeed) -> Result<BitString> {
    if let Some(bad) = seed.vectors.iter().find(|v| v.len() != x.len()) {
        return Err(Error::LengthMismatch { expected: x.len(), actual: bad.len() });
    }
    Ok(seed.vectors.iter().map(|v| x.dot(v)).collect())
}

/// How the GL vectors are drawn for a bias census.
#[derive(Clone, Debug)]
pub enum GlSeedDistribution {
    /// A joint distribution over serialized `k·n`-bit seeds.
    Joint { k: usize, seeds: ExactDistribution },
    /// Independent vectors, one marginal per output bit.
    Independent(Vec<ExactDistribution>),
}

/// Exact `Pr[bit_i = 1]` for every output bit, with `x` drawn from `source`
/// independently of the seed.
pub fn gl_bias_census(source: &ExactDistribution, seeds: &GlSeedDistribution) -> Result<Vec<Rational>> {
    let n = source.outcome_bits();
    match seeds {
        GlSeedDistribution::Independent(marginals) => marginals
            .iter()
            .map(|m| {
                if m.outcome_bits() != n {
                    return Err(Error::LengthMismatch { expected: n, actual: m.outcome_bits() });
                }
                let mut ones = BigInt::from(0u8);
                for (x, wx) in source.iter() {
                    for (v, wv) in m.iter() {
                        if x.dot(v) {
                            ones += BigInt::from(wx) * BigInt::from(wv);
                        }
                    }
                }
                Ok(Rational::new(ones, BigInt::from(source.total()) * BigInt::from(m.total())))
            })
            .collect(),
        GlSeedDistribution::Joint { k, seeds } => {
            if seeds.outcome_bits() != k * n {
                return Err(Error::LengthMismatch { expected: k * n, actual: seeds.outcome_bits() });
            }
            let mut ones = vec![BigInt::from(0u8); *k];
            for (x, wx) in source.iter() {
                for (s, ws) in seeds.iter() {
                    let seed = GlSeed::from_bits(s, *k, n)?;
                    let w = BigInt::from(wx) * BigInt::from(ws);
                    for (i, bit) in gl(x, &seed)?.iter().enumerate() {
                        if bit {
                            ones[i] += &w;
                        }
                    }
                }
            }
            let den = BigInt::from(source.total()) * BigInt::from(seeds.total());
            Ok(ones.into_iter().map(|o| Rational::new(o, den.clone())).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn zero_vectors_give_zero_bits() {
        let seed = GlSeed::new(vec![b("000"); 4]).unwrap();
        assert_eq!(gl(&b("101"), &seed).unwrap(), b("0000"));
    }

    #[test]
    fn standard_basis_is_identity() {
        let seed = GlSeed::new(vec![b("100"), b("010"), b("001")]).unwrap();
        for x in BitString::all(3) {
            assert_eq!(gl(&x, &seed).unwrap(), x);
        }
    }

    #[test]
    fn hand_computed_pair() {
        // ⟨101,111⟩ = 1+0+1 = 0; ⟨101,100⟩ = 1
        let seed = GlSeed::new(vec![b("111"), b("100")]).unwrap();
        assert_eq!(gl(&b("101"), &seed).unwrap(), b("01"));
    }

    #[test]
    fn length_mismatch() {
        let seed = GlSeed::new(vec![b("11")]).unwrap();
        assert!(gl(&b("101"), &seed).is_err());
        assert!(GlSeed::new(vec![b("11"), b("1")]).is_err());
        assert!(GlSeed::from_bits(&b("111"), 2, 2).is_err());
    }

    #[test]
    fn bias_uniform_input_nonzero_vector() {
        for n in 1..=6 {
            let source = ExactDistribution::uniform(n);
            for v in BitString::all(n).filter(|v| v.count_ones() > 0) {
                let seeds = GlSeedDistribution::Independent(vec![ExactDistribution::point(v)]);
                assert_eq!(gl_bias_census(&source, &seeds).unwrap(), vec![r(1, 2)]);
            }
        }
    }

    #[test]
    fn bias_point_mass_zero() {
        let source = ExactDistribution::point(BitString::zeros(4));
        let seeds = GlSeedDistribution::Joint { k: 2, seeds: ExactDistribution::uniform(8) };
        assert_eq!(gl_bias_census(&source, &seeds).unwrap(), vec![r(0, 1), r(0, 1)]);
    }

    #[test]
    fn bias_uniform_vectors_include_zero() {
        // Uniform x and a uniform vector over all 2^4 values: the zero vector
        // (probability 1/16) always yields 0, every other vector is unbiased.
        let source = ExactDistribution::uniform(4);
        let joint = GlSeedDistribution::Joint { k: 2, seeds: ExactDistribution::uniform(8) };
        let indep = GlSeedDistribution::Independent(vec![ExactDistribution::uniform(4); 2]);
        let expected = vec![r(15, 32), r(15, 32)];
        assert_eq!(gl_bias_census(&source, &joint).unwrap(), expected);
        assert_eq!(gl_bias_census(&source, &indep).unwrap(), expected);
    }

    proptest! {
        #[test]
        fn linearity(
            x in proptest::collection::vec(any::<bool>(), 8),
            y in proptest::collection::vec(any::<bool>(), 8),
            rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 8), 1..6),
        ) {
            let x = BitString::from_bools(&x);
            let y = BitString::from_bools(&y);
            let seed = GlSeed::new(rows.iter().map(|r| BitString::from_bools(r)).collect()).unwrap();
            let lhs = gl(&x.xor(&y), &seed).unwrap();
            let rhs = gl(&x, &seed).unwrap().xor(&gl(&y, &seed).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
