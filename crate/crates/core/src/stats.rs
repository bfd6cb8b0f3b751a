// SPDX-License-Identifier: Apache-2.0

//! Exact finite distributions over bitstrings.
//!
//! Probabilities are stored as integer weights over a common total, so every
//! probability and every statistical distance is an exact rational. Entropies
//! are the one place floating point enters; compare them with [`ENTROPY_SLACK`].

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Comparison slack for floating-point entropy bounds.
pub const ENTROPY_SLACK: f64 = 1e-9;

/// Confidence level used by [`hoeffding_epsilon`].
pub const HOEFFDING_CONFIDENCE: f64 = 0.99;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Numerators and denominators here routinely exceed 2^63.
    let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

/// Checks `x ≤ coeff · base^(−num/den)` exactly, for `x ≥ 0`.
///
/// Equivalent to `(x / coeff)^den · base^num ≤ 1`.
pub fn le_scaled_inverse_power(x: &Rational, coeff: &Rational, base: u64, num: u32, den: u32) -> bool {
    assert!(den > 0 && coeff.is_positive());
    if x.is_negative() {
        return true;
    }
    let scaled = x / coeff;
    let lhs = num_traits::pow(scaled, den as usize) * Rational::from_integer(num_traits::pow(BigInt::from(base), num as usize));
    lhs <= Rational::one()
}

/// A finite distribution on `{0,1}^outcome_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    outcome_bits: usize,
    weights: BTreeMap<BitString, u128>,
    total: u128,
}

impl ExactDistribution {
    /// Builds a distribution from (outcome, weight) pairs; repeated outcomes add up.
    pub fn from_weights<I>(outcome_bits: usize, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitString, u128)>,
    {
        let mut weights = BTreeMap::new();
        let mut total = 0u128;
        for (x, w) in items {
            if x.len() != outcome_bits {
                return Err(Error::LengthMismatch { expected: outcome_bits, actual: x.len() });
            }
            if w == 0 {
                continue;
            }
            *weights.entry(x).or_insert(0) += w;
            total += w;
        }
        if total == 0 {
            return Err(Error::InvalidParams("distribution with zero total weight".into()));
        }
        Ok(Self { outcome_bits, weights, total })
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_weights(n, BitString::all(n).map(|x| (x, 1))).expect("nonempty")
    }

    /// Uniform over the given (distinct) outcomes.
    pub fn uniform_over<I: IntoIterator<Item = BitString>>(outcome_bits: usize, support: I) -> Result<Self> {
        Self::from_weights(outcome_bits, support.into_iter().map(|x| (x, 1)))
    }

    pub fn point(x: BitString) -> Self {
        let n = x.len();
        Self::from_weights(n, [(x, 1)]).expect("nonempty")
    }

    pub fn outcome_bits(&self) -> usize {
        self.outcome_bits
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, u128)> {
        self.weights.iter().map(|(x, &w)| (x, w))
    }

    pub fn weight(&self, x: &BitString) -> u128 {
        self.weights.get(x).copied().unwrap_or(0)
    }

    pub fn prob(&self, x: &BitString) -> Rational {
        Rational::new(BigInt::from(self.weight(x)), BigInt::from(self.total))
    }

    /// Exact probability of an event.
    pub fn prob_of<F: Fn(&BitString) -> bool>(&self, event: F) -> Rational {
        let w: u128 = self.iter().filter(|(x, _)| event(x)).map(|(_, w)| w).sum();
        Rational::new(BigInt::from(w), BigInt::from(self.total))
    }

    /// Exact `E[g(X)]` for an integer-valued `g`.
    pub fn expectation<F: Fn(&BitString) -> i64>(&self, g: F) -> Rational {
        let mut acc = BigInt::zero();
        for (x, w) in self.iter() {
            acc += BigInt::from(g(x)) * BigInt::from(w);
        }
        Rational::new(acc, BigInt::from(self.total))
    }

    pub fn max_weight(&self) -> u128 {
        self.weights.values().copied().max().unwrap_or(0)
    }

    /// Writes the CSV dump `outcome_hex,numerator,denominator` (reduced fractions).
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "outcome_hex,numerator,denominator")?;
        for (x, weight) in self.iter() {
            let g = weight.gcd(&self.total);
            writeln!(w, "{},{},{}", x.to_hex(), weight / g, self.total / g)?;
        }
        Ok(())
    }
}

/// Statistical distance `½ Σ |P(v) − Q(v)|`.
pub fn sd(p: &ExactDistribution, q: &ExactDistribution) -> Result<Rational> {
    if p.outcome_bits != q.outcome_bits {
        return Err(Error::LengthMismatch { expected: p.outcome_bits, actual: q.outcome_bits });
    }
    let (tp, tq) = (BigInt::from(p.total), BigInt::from(q.total));
    let mut acc = BigInt::zero();
    for (x, wp) in p.iter() {
        let diff = BigInt::from(wp) * &tq - BigInt::from(q.weight(x)) * &tp;
        acc += diff.abs();
    }
    for (x, wq) in q.iter() {
        if p.weight(x) == 0 {
            acc += BigInt::from(wq) * &tp;
        }
    }
    Ok(Rational::new(acc, BigInt::from(2u8) * tp * tq))
}

/// `SD(P, U_n)` without materializing the uniform distribution.
pub fn sd_to_uniform(p: &ExactDistribution) -> Rational {
    let n = p.outcome_bits;
    let space = BigInt::one() << n;
    let tp = BigInt::from(p.total);
    // |w/T − 1/2^n| = |w·2^n − T| / (T·2^n)
    let mut acc = BigInt::zero();
    for (_, w) in p.iter() {
        acc += (BigInt::from(w) * &space - &tp).abs();
    }
    let missing = &space - BigInt::from(p.support_size());
    acc += missing * &tp;
    Rational::new(acc, BigInt::from(2u8) * tp * space)
}

/// Shannon entropy in bits, `Σ p log(1/p)`.
pub fn shannon_entropy(p: &ExactDistribution) -> f64 {
    let total = p.total as f64;
    let weighted: f64 = p.iter().map(|(_, w)| (w as f64) * (w as f64).log2()).sum();
    (total.log2() - weighted / total).max(0.0)
}

/// Min-entropy in bits, `−log max p`.
pub fn min_entropy(p: &ExactDistribution) -> f64 {
    ((p.total as f64).log2() - (p.max_weight() as f64).log2()).max(0.0)
}

/// Shannon entropy of a histogram given as raw counts.
pub fn entropy_of_counts<I: IntoIterator<Item = u64>>(counts: I) -> f64 {
    let mut total = 0u64;
    let mut weighted = 0.0f64;
    for c in counts {
        if c > 0 {
            total += c;
            weighted += (c as f64) * (c as f64).log2();
        }
    }
    if total == 0 {
        return 0.0;
    }
    ((total as f64).log2() - weighted / total as f64).max(0.0)
}

#[derive(Clone, Debug)]
pub struct SdEntropyVerdict {
    pub n: usize,
    pub sd_to_uniform: Rational,
    pub premise: bool,
    pub entropy: f64,
    /// `premise ⇒ entropy ≥ n − 2` (with [`ENTROPY_SLACK`]).
    pub holds: bool,
}

/// If `SD(P, U_n) ≤ 1/n²` then `H(P) ≥ n − 2`; reports both sides.
pub fn sd_entropy_lemma_check(p: &ExactDistribution) -> Result<SdEntropyVerdict> {
    let n = p.outcome_bits;
    if n < 4 {
        return Err(Error::InvalidParams(format!("the entropy bound needs n >= 4, got {n}")));
    }
    let dist = sd_to_uniform(p);
    let premise = dist <= rational(1, (n * n) as i64);
    let entropy = shannon_entropy(p);
    let holds = !premise || entropy >= n as f64 - 2.0 - ENTROPY_SLACK;
    Ok(SdEntropyVerdict { n, sd_to_uniform: dist, premise, entropy, holds })
}

/// Exact pushforward of `input` through `f`; refuses inputs with more than
/// `max_support` outcomes.
pub fn exact_output_distribution<F>(
    f: F,
    input: &ExactDistribution,
    output_bits: usize,
    max_support: usize,
) -> Result<ExactDistribution>
where
    F: Fn(&BitString) -> BitString,
{
    if input.support_size() > max_support {
        return Err(Error::BudgetExceeded(format!(
            "input support {} exceeds the pushforward limit {max_support}",
            input.support_size()
        )));
    }
    ExactDistribution::from_weights(output_bits, input.iter().map(|(x, w)| (f(x), w)))
}

/// `sqrt(ln(2/(1−confidence)) / (2·count))` at the fixed 99% confidence level.
pub fn hoeffding_epsilon(count: u64) -> f64 {
    assert!(count >= 1);
    ((2.0 / (1.0 - HOEFFDING_CONFIDENCE)).ln() / (2.0 * count as f64)).sqrt()
}

/// Empirical distribution of `count` draws of `f`, reproducible from `seed`.
pub fn sampled_distribution<F>(
    mut f: F,
    seed: u64,
    count: u64,
    outcome_bits: usize,
) -> Result<(ExactDistribution, f64)>
where
    F: FnMut(&mut ChaCha8Rng) -> BitString,
{
    if count == 0 {
        return Err(Error::InvalidParams("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = ExactDistribution::from_weights(outcome_bits, (0..count).map(|_| (f(&mut rng), 1)))?;
    Ok((dist, hoeffding_epsilon(count)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn two_point(p_num: u128, p_den: u128) -> ExactDistribution {
        ExactDistribution::from_weights(1, [(b("0"), p_num), (b("1"), p_den - p_num)]).unwrap()
    }

    #[test]
    fn sd_examples() {
        let u2 = ExactDistribution::uniform(2);
        assert_eq!(sd(&u2, &u2).unwrap(), rational(0, 1));
        let p0 = ExactDistribution::point(b("0"));
        let p1 = ExactDistribution::point(b("1"));
        assert_eq!(sd(&p0, &p1).unwrap(), rational(1, 1));
        let half = ExactDistribution::uniform_over(2, [b("00"), b("01")]).unwrap();
        // ½(|½−¼|·2 + ¼·2) = ½
        assert_eq!(sd(&half, &u2).unwrap(), rational(1, 2));
        assert_eq!(sd_to_uniform(&half), rational(1, 2));
        assert!(sd(&half, &p0).is_err());
    }

    #[test]
    fn entropy_examples() {
        for n in 0..8 {
            let u = ExactDistribution::uniform(n);
            assert!((shannon_entropy(&u) - n as f64).abs() < ENTROPY_SLACK);
            assert!((min_entropy(&u) - n as f64).abs() < ENTROPY_SLACK);
        }
        let point = ExactDistribution::point(b("0101"));
        assert_eq!(shannon_entropy(&point), 0.0);
        assert_eq!(min_entropy(&point), 0.0);
        let p = two_point(3, 4);
        let closed_form = 2.0 - 0.75 * 3f64.log2();
        assert!((shannon_entropy(&p) - closed_form).abs() < 1e-12);
        assert!((shannon_entropy(&p) - 0.811).abs() < 1e-3);
        assert!((min_entropy(&p) - (4.0f64 / 3.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn lemma_check_examples() {
        let u = ExactDistribution::uniform(4);
        let v = sd_entropy_lemma_check(&u).unwrap();
        assert!(v.premise && v.holds);
        assert!((v.entropy - 4.0).abs() < ENTROPY_SLACK);

        // Move exactly 1/n² = 1/16 of the mass onto one point, taken evenly
        // from the other 15 outcomes; total 16·16·15 keeps the move integral.
        let total: u128 = 16 * 16 * 15;
        let base = total / 16;
        let moved = total / 16; // 1/n² at n = 4
        let mut items: Vec<(BitString, u128)> = Vec::new();
        for (i, x) in BitString::all(4).enumerate() {
            let w = if i == 0 { base + moved } else { base - moved / 15 };
            items.push((x, w));
        }
        let p = ExactDistribution::from_weights(4, items).unwrap();
        let v = sd_entropy_lemma_check(&p).unwrap();
        assert_eq!(v.sd_to_uniform, rational(1, 16));
        assert!(v.premise);
        assert!(v.entropy >= 2.0);
        assert!(v.holds);

        let far = ExactDistribution::point(b("0000"));
        let v = sd_entropy_lemma_check(&far).unwrap();
        assert!(!v.premise && v.holds);

        assert!(sd_entropy_lemma_check(&ExactDistribution::uniform(3)).is_err());
    }

    #[test]
    fn pushforwards() {
        let u = ExactDistribution::uniform(3);
        let id = exact_output_distribution(|x| x.clone(), &u, 3, 100).unwrap();
        assert_eq!(id, u);
        let c = exact_output_distribution(|_| b("11"), &u, 2, 100).unwrap();
        assert_eq!(c.support_size(), 1);
        assert_eq!(c.prob(&b("11")), rational(1, 1));
        assert!(exact_output_distribution(|x| x.clone(), &u, 3, 4).is_err());
    }

    #[test]
    fn sampling_is_reproducible_and_converges() {
        let draw = |rng: &mut ChaCha8Rng| BitString::from_u64(rng.gen_range(0..4), 2);
        let (a, eps_a) = sampled_distribution(draw, 7, 1000, 2).unwrap();
        let (b2, eps_b) = sampled_distribution(draw, 7, 1000, 2).unwrap();
        assert_eq!(a, b2);
        assert_eq!(eps_a, eps_b);

        let (one, _) = sampled_distribution(draw, 9, 1, 2).unwrap();
        assert_eq!(one.support_size(), 1);

        let (big, eps) = sampled_distribution(draw, 11, 200_000, 2).unwrap();
        let dist = rational_to_f64(&sd(&big, &ExactDistribution::uniform(2)).unwrap());
        assert!(dist < eps, "empirical SD {dist} vs eps {eps}");
        assert!((hoeffding_epsilon(1) - (200f64.ln() / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn scaled_inverse_power() {
        // 1/2 ≤ 2^(−2/2)
        assert!(le_scaled_inverse_power(&rational(1, 2), &rational(1, 1), 2, 2, 2));
        assert!(!le_scaled_inverse_power(&rational(51, 100), &rational(1, 1), 2, 2, 2));
        // 0.7 ≤ 2^(−1/2) ≈ 0.7071
        assert!(le_scaled_inverse_power(&rational(7, 10), &rational(1, 1), 2, 1, 2));
        assert!(!le_scaled_inverse_power(&rational(71, 100), &rational(1, 1), 2, 1, 2));
        // 3/n^(α′/2) with α′ = 0 is 3
        assert!(le_scaled_inverse_power(&rational(3, 1), &rational(3, 1), 4, 0, 2));
    }

    /// Finite metric checks over a seeded corpus.
    #[test]
    fn sd_is_a_metric_on_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let corpus: Vec<ExactDistribution> = (0..12)
            .map(|_| {
                ExactDistribution::from_weights(3, BitString::all(3).map(|x| (x, rng.gen_range(0..5u128))).chain([(b("000"), 1)]))
                    .unwrap()
            })
            .collect();
        for p in &corpus {
            assert!(sd(p, p).unwrap().is_zero());
            let h = shannon_entropy(p);
            let hmin = min_entropy(p);
            assert!(hmin >= -ENTROPY_SLACK && hmin <= h + ENTROPY_SLACK && h <= 3.0 + ENTROPY_SLACK);
            for q in &corpus {
                let pq = sd(p, q).unwrap();
                assert_eq!(pq, sd(q, p).unwrap());
                let same = BitString::all(3).all(|x| p.prob(&x) == q.prob(&x));
                assert_eq!(pq.is_zero(), same);
                for r in &corpus {
                    assert!(sd(p, r).unwrap() <= &pq + sd(q, r).unwrap());
                }
            }
        }
    }
}
