// SPDX-License-Identifier: Apache-2.0

//! Turning a `K^t` heuristic into a distinguisher for the machine's builtin
//! generator, and the two counting facts it rests on.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};
use crate::kolmogorov::{count_with, KtCensus, KtLookup};
use crate::prg::expander::Expander;
use crate::prg::Generator;
use crate::stats::{exact_output_distribution, le_scaled_inverse_power, rational, ExactDistribution, Rational};
use crate::tinyvm::{MachineConfig, BUILTIN_FRAMING_BITS};

/// Longest output enumerated when measuring acceptance on `U_m`.
pub const MAX_UNIFORM_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguisherParams {
    pub n: usize,
    pub m: usize,
    pub gamma: u32,
    pub truncation_c: usize,
    pub d: u32,
    /// `(γ/8)⌈log n⌉`, floored.
    pub beta: usize,
    /// `m − ⌈(3/8)γ⌈log n⌉⌉`.
    pub threshold: usize,
}

impl DistinguisherParams {
    pub fn new(n: usize, gamma: u32, truncation_c: usize, d: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams("the distinguisher needs n >= 2".into()));
        }
        if gamma < 8.max(8 * d) {
            return Err(Error::InvalidParams(format!("gamma = {gamma} is below max(8, 8d) with d = {d}")));
        }
        if truncation_c > gamma as usize + 1 {
            return Err(Error::InvalidParams(format!("truncation {truncation_c} outside 0..={}", gamma + 1)));
        }
        let log_n = ceil_log2(n as u64) as usize;
        let stretch = gamma as usize * log_n;
        if truncation_c >= stretch {
            return Err(Error::InvalidParams(format!(
                "truncating {truncation_c} of {stretch} extra bits leaves no expansion"
            )));
        }
        let m = n + stretch - truncation_c;
        let gap = (3 * stretch).div_ceil(8);
        Ok(Self { n, m, gamma, truncation_c, d, beta: stretch / 8, threshold: m - gap })
    }

    /// The builtin generator this parameter set attacks.
    pub fn generator(&self) -> Expander {
        Expander::new(self.gamma, self.truncation_c)
    }
}

/// A generator with its last `c` output bits removed.
#[derive(Clone, Debug)]
pub struct Truncated<G> {
    inner: G,
    c: usize,
}

impl<G: Generator> Generator for Truncated<G> {
    fn output_len(&self, seed_len: usize) -> usize {
        self.inner.output_len(seed_len) - self.c
    }

    fn generate(&self, seed: &BitString) -> Result<BitString> {
        let y = self.inner.generate(seed)?;
        Ok(y.prefix(y.len() - self.c))
    }
}

/// `G^c`: refuses a `c` that would leave the output no longer than the seed.
pub fn truncate_prg<G: Generator>(g: G, c: usize, seed_len: usize) -> Result<Truncated<G>> {
    let out = g.output_len(seed_len);
    if c > out {
        return Err(Error::InvalidParams(format!("cannot truncate {c} of {out} bits")));
    }
    if out - c <= seed_len {
        return Err(Error::InvalidParams(format!("truncating {c} bits leaves no expansion over {seed_len}")));
    }
    Ok(Truncated { inner: g, c })
}

/// A total estimate of `K^t` on strings of one length.
pub trait Heuristic: Sync {
    fn estimate(&self, x: &BitString) -> usize;
}

impl<F: Fn(&BitString) -> usize + Sync> Heuristic for F {
    fn estimate(&self, x: &BitString) -> usize {
        self(x)
    }
}

/// Exact `K^t` read from a census whose cap covers the queried length.
pub struct ExactKt<'a>(pub &'a KtCensus);

impl Heuristic for ExactKt<'_> {
    fn estimate(&self, x: &BitString) -> usize {
        match self.0.lookup(x) {
            KtLookup::Exact(r) => r.length,
            KtLookup::Above(cap) => cap + 1,
        }
    }
}

/// Exact `K^t` replaced by `|x| + 1` on a seeded fraction of strings.
pub struct PerturbedKt<'a> {
    pub census: &'a KtCensus,
    pub fraction: f64,
    pub seed: u64,
}

impl Heuristic for PerturbedKt<'_> {
    fn estimate(&self, x: &BitString) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ x.to_u64().rotate_left(17) ^ x.len() as u64);
        if rng.gen::<f64>() < self.fraction {
            x.len() + 1
        } else {
            ExactKt(self.census).estimate(x)
        }
    }
}

/// Named heuristics for the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum HeuristicSpec {
    ExactKt,
    Const(usize),
    Length,
    PerturbedKt(f64),
}

impl FromStr for HeuristicSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("heuristic {s:?} (expected exact-kt, const:<w>, length or perturbed-kt:<frac>)"));
        match s.split_once(':') {
            None if s == "exact-kt" => Ok(HeuristicSpec::ExactKt),
            None if s == "length" => Ok(HeuristicSpec::Length),
            Some(("const", w)) => w.parse().map(HeuristicSpec::Const).map_err(|_| bad()),
            Some(("perturbed-kt", f)) => match f.parse::<f64>() {
                Ok(f) if (0.0..=1.0).contains(&f) => Ok(HeuristicSpec::PerturbedKt(f)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl HeuristicSpec {
    pub fn build<'a>(&self, census: &'a KtCensus, seed: u64) -> Box<dyn Heuristic + 'a> {
        match *self {
            HeuristicSpec::ExactKt => Box::new(ExactKt(census)),
            HeuristicSpec::Const(w) => Box::new(move |_: &BitString| w),
            HeuristicSpec::Length => Box::new(|x: &BitString| x.len()),
            HeuristicSpec::PerturbedKt(fraction) => Box::new(PerturbedKt { census, fraction, seed }),
        }
    }
}

/// Outputs 1 iff the heuristic's estimate reaches the threshold.
pub struct Distinguisher<'a> {
    heuristic: &'a dyn Heuristic,
    pub threshold: usize,
}

pub fn build_distinguisher<'a>(heuristic: &'a dyn Heuristic, params: &DistinguisherParams) -> Distinguisher<'a> {
    Distinguisher { heuristic, threshold: params.threshold }
}

impl<'a> Distinguisher<'a> {
    pub fn with_threshold(heuristic: &'a dyn Heuristic, threshold: usize) -> Self {
        Self { heuristic, threshold }
    }

    pub fn decide(&self, x: &BitString) -> bool {
        self.heuristic.estimate(x) >= self.threshold
    }

    pub fn acceptance(&self, p: &ExactDistribution) -> Rational {
        p.prob_of(|x| self.decide(x))
    }

    /// `Pr[D(U_m) = 1]` by enumerating all of `{0,1}^m`.
    pub fn acceptance_uniform(&self, m: usize) -> Result<Rational> {
        if m > MAX_UNIFORM_BITS {
            return Err(Error::BudgetExceeded(format!("enumerating {{0,1}}^{m}")));
        }
        let hits = (0..1u64 << m).into_par_iter().filter(|&v| self.decide(&BitString::from_u64(v, m))).count();
        Ok(Rational::new(BigInt::from(hits), BigInt::one() << m))
    }
}

/// `|E_P[D] − E_Q[D]|`.
pub fn advantage(dist: &Distinguisher, p: &ExactDistribution, q: &ExactDistribution) -> Result<Rational> {
    if p.outcome_bits() != q.outcome_bits() {
        return Err(Error::LengthMismatch { expected: p.outcome_bits(), actual: q.outcome_bits() });
    }
    let gap = dist.acceptance(p) - dist.acceptance(q);
    Ok(if gap < Rational::zero() { -gap } else { gap })
}

/// `G(U_n)` for a generator over all `n`-bit seeds.
pub fn prg_distribution<G: Generator>(g: &G, n: usize) -> Result<ExactDistribution> {
    exact_output_distribution(|s| g.generate(s).expect("seed of length n"), &ExactDistribution::uniform(n), g.output_len(n), 1 << 20)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq1Verdict {
    pub m: usize,
    /// `m − ⌈(γ/4)⌈log n⌉⌉`, which may be `≤ 0`.
    pub threshold: i64,
    /// `Pr_x[K^t(x) ≥ threshold]` over `x ∈ {0,1}^m`.
    pub fraction: Rational,
    /// `1 − 1/n^{γ/4}` for display.
    pub bound: f64,
    pub holds: bool,
    /// Set when the threshold lies outside `1..=m`.
    pub note: Option<String>,
}

/// Eq. (1)-style counting at `m = n + γ⌈log n⌉ − c`.
pub fn eq1_census(n: usize, t: u64, gamma: u32, truncation_c: usize) -> Result<Eq1Verdict> {
    let log_n = ceil_log2(n.max(2) as u64) as usize;
    let m = (n + gamma as usize * log_n)
        .checked_sub(truncation_c)
        .ok_or_else(|| Error::InvalidParams("truncation exceeds the output".into()))?;
    let threshold = m as i64 - (gamma as usize * log_n).div_ceil(4) as i64;
    let bound = 1.0 - (n as f64).powf(-(gamma as f64) / 4.0);
    let (fraction, note) = if threshold <= 0 {
        (rational(1, 1), Some(format!("threshold {threshold} <= 0: every string qualifies")))
    } else if threshold as usize > m + 1 {
        (rational(0, 1), Some(format!("threshold {threshold} > m + 1: no string qualifies")))
    } else {
        let census = KtCensus::build(t, threshold as usize - 1)?;
        let low = count_with(&census, m, threshold as usize);
        (rational(1, 1) - Rational::new(BigInt::from(low), BigInt::one() << m), None)
    };
    // 1 − f ≤ n^{−γ/4}
    let holds = le_scaled_inverse_power(&(rational(1, 1) - &fraction), &rational(1, 1), n as u64, gamma, 4);
    Ok(Eq1Verdict { m, threshold, fraction, bound, holds, note })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq2Verdict {
    pub seed_bits: usize,
    pub m: usize,
    /// `m − ⌈(γ/2)⌈log n⌉⌉`.
    pub threshold: i64,
    /// Largest `K^t(G(s))` over all seeds; `None` if some seed has no witness within the census.
    pub max_kt: Option<usize>,
    /// Seeds whose output has a witness of at most `seed_bits + 9` bits.
    pub within_framing: u64,
    /// Seeds whose output falls below the threshold.
    pub below_threshold: u64,
    pub seeds: u64,
    pub vacuous: bool,
    pub holds: bool,
}

/// Checks `K^t(g(s)) ≤ |s| + 9` and `K^t(g(s)) < m − ⌈(γ/2)⌈log n⌉⌉` for every seed.
pub fn eq2_census_for<F>(g: F, seed_bits: usize, t: u64, gamma: i32) -> Result<Eq2Verdict>
where
    F: Fn(&BitString) -> BitString + Sync,
{
    let cap = seed_bits + BUILTIN_FRAMING_BITS;
    let census = KtCensus::build(t, cap)?;
    let outputs: Vec<BitString> = BitString::all(seed_bits).map(|s| g(&s)).collect();
    let m = outputs.first().map_or(0, |y| y.len());
    if outputs.iter().any(|y| y.len() != m) {
        return Err(Error::InvalidParams("generator outputs vary in length".into()));
    }
    let log_n = ceil_log2(seed_bits.max(2) as u64) as i64;
    let threshold = m as i64 - (i64::from(gamma) * log_n + 1).div_euclid(2);
    let kts: Vec<Option<usize>> = outputs
        .par_iter()
        .map(|y| match census.lookup(y) {
            KtLookup::Exact(r) => Some(r.length),
            KtLookup::Above(_) => None,
        })
        .collect();
    let within_framing = kts.iter().filter(|k| k.is_some_and(|k| k <= cap)).count() as u64;
    let below_threshold = kts.iter().filter(|k| k.is_some_and(|k| (k as i64) < threshold)).count() as u64;
    let seeds = kts.len() as u64;
    let vacuous = threshold > m as i64 + 1;
    let max_kt = kts.iter().copied().collect::<Option<Vec<_>>>().and_then(|v| v.into_iter().max());
    let holds = vacuous || (within_framing == seeds && below_threshold == seeds);
    Ok(Eq2Verdict { seed_bits, m, threshold, max_kt, within_framing, below_threshold, seeds, vacuous, holds })
}

/// [`eq2_census_for`] with a registered builtin.
pub fn eq2_census(builtin_id: u8, seed_bits: usize, t: u64, gamma: i32) -> Result<Eq2Verdict> {
    let builtin = MachineConfig::standard().builtin(builtin_id).ok_or(Error::UnknownBuiltin(builtin_id))?;
    eq2_census_for(|s| builtin.apply(s), seed_bits, t, gamma)
}

/// A seeded lookup table `{0,1}^in → {0,1}^out`; its outputs are incompressible in practice.
pub fn random_table_function(in_bits: usize, out_bits: usize, seed: u64) -> impl Fn(&BitString) -> BitString + Sync {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table: Vec<BitString> =
        (0..1u64 << in_bits).map(|_| (0..out_bits).map(|_| rng.gen::<bool>()).collect()).collect();
    move |s: &BitString| table[s.to_u64() as usize].clone()
}

/// One row of the truncation sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct DistinguisherRow {
    pub params: DistinguisherParams,
    pub acceptance_uniform: Rational,
    pub acceptance_prg: Rational,
    pub advantage: Rational,
    /// `Pr[D(U_m) = 1] ≥ 1 − 2/n^{γ/4}`.
    pub uniform_accepted: bool,
    /// `Pr[D(G(U|E)) = 1] = 0`.
    pub prg_rejected: bool,
    /// `advantage > 1/n²`.
    pub beats_target: bool,
}

/// Runs the distinguisher against `G^c` for one truncation.
pub fn distinguisher_row(params: &DistinguisherParams, heuristic: &dyn Heuristic) -> Result<DistinguisherRow> {
    let dist = build_distinguisher(heuristic, params);
    let g = params.generator();
    let acceptance_uniform = dist.acceptance_uniform(params.m)?;
    let prg = prg_distribution(&g, params.n)?;
    let acceptance_prg = dist.acceptance(&prg);
    let gap = &acceptance_uniform - &acceptance_prg;
    let advantage = if gap < Rational::zero() { -gap } else { gap };
    let n = params.n as u64;
    let rejection = rational(1, 1) - &acceptance_uniform;
    Ok(DistinguisherRow {
        params: params.clone(),
        uniform_accepted: le_scaled_inverse_power(&rejection, &rational(2, 1), n, params.gamma, 4),
        prg_rejected: acceptance_prg.is_zero(),
        beats_target: advantage > Rational::new(BigInt::one(), BigInt::from(n * n)),
        acceptance_uniform,
        acceptance_prg,
        advantage,
    })
}
