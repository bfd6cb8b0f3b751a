// SPDX-License-Identifier: Apache-2.0

//! The candidate `f(ℓ ‖ Π′) = ℓ ‖ U(Π′[..ℓ], 1^{t(n)})` and the reduction
//! that turns an inverter for it into a `K^t` heuristic.
//!
//! The `⌈log(n+c)⌉`-bit length field holds `ℓ − 1`; values past `n + c − 1`
//! are clamped to `ℓ = n + c`, so every `ℓ ∈ 1..=n+c` is reachable and `f`
//! is total.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};
use crate::kolmogorov::KtCensus;
use crate::prg::longest_valid_prefix;
use crate::stats::Rational;
use crate::tinyvm::{run, MachineConfig, Program, RunResult};

/// Largest `n` for which the input space is enumerated.
pub const MAX_OWF_BITS: usize = 12;

/// How `t(n)` is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeSchedule {
    Linear4n,
    Quadratic,
    Fixed(u64),
}

impl TimeSchedule {
    pub fn t(&self, n: usize) -> u64 {
        match *self {
            TimeSchedule::Linear4n => 4 * n as u64,
            TimeSchedule::Quadratic => (n * n) as u64,
            TimeSchedule::Fixed(t) => t,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TimeSchedule::Linear4n => "4n".into(),
            TimeSchedule::Quadratic => "n^2".into(),
            TimeSchedule::Fixed(t) => t.to_string(),
        }
    }
}

impl FromStr for TimeSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4n" => Ok(TimeSchedule::Linear4n),
            "n^2" | "n2" => Ok(TimeSchedule::Quadratic),
            _ => s
                .strip_prefix("fixed:")
                .unwrap_or(s)
                .parse()
                .map(TimeSchedule::Fixed)
                .map_err(|_| Error::Parse(format!("time schedule {s:?} (expected 4n, n^2 or an integer)"))),
        }
    }
}

/// `c` of the literal encoding.
pub fn overhead_c() -> usize {
    MachineConfig::standard().literal_overhead_c
}

/// Width of the length field, `⌈log(n+c)⌉`.
pub fn ell_bits(n: usize) -> usize {
    ceil_log2((n + overhead_c()) as u64) as usize
}

/// Input length `m = n + c + ⌈log(n+c)⌉`.
pub fn input_len(n: usize) -> usize {
    n + overhead_c() + ell_bits(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OwfInput {
    pub n: usize,
    pub ell_field: BitString,
    pub pi_prime: BitString,
}

impl OwfInput {
    pub fn from_bits(n: usize, bits: &BitString) -> Result<Self> {
        if bits.len() != input_len(n) {
            return Err(Error::LengthMismatch { expected: input_len(n), actual: bits.len() });
        }
        let l = ell_bits(n);
        Ok(Self { n, ell_field: bits.prefix(l), pi_prime: bits.slice(l, bits.len()) })
    }

    pub fn to_bits(&self) -> BitString {
        self.ell_field.concat(&self.pi_prime)
    }

    /// Decoded `ℓ ∈ 1..=n+c`.
    pub fn ell(&self) -> usize {
        (self.ell_field.to_u64() as usize + 1).min(self.n + overhead_c())
    }

    pub fn program(&self) -> Program {
        Program::new(self.pi_prime.prefix(self.ell())).expect("ℓ >= 1")
    }
}

/// `ℓ ‖ y`, with `y = None` standing for the reserved ⊥ output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OwfOutput {
    pub ell: usize,
    pub y: Option<BitString>,
}

impl OwfOutput {
    /// Length field (`ℓ − 1`), then `1 ‖ y` or `0` for ⊥.
    pub fn to_bits(&self, n: usize) -> BitString {
        let mut out = BitString::from_u64(self.ell as u64 - 1, ell_bits(n));
        match &self.y {
            Some(y) => {
                out.push(true);
                out.extend_from(y);
            }
            None => out.push(false),
        }
        out
    }
}

pub fn eval_f(input: &OwfInput, t: u64) -> OwfOutput {
    let y = match run(&input.program(), t) {
        RunResult::Output(y) => Some(y),
        RunResult::Timeout | RunResult::Malformed => None,
    };
    OwfOutput { ell: input.ell(), y }
}

/// Finds `n` with `input_len(n) = m`.
pub fn n_for_input_len(m: usize) -> Option<usize> {
    (1..=m).find(|&n| input_len(n) == m)
}

/// Evaluates `f` on the longest valid prefix of `x′`; returns that `n` too.
pub fn eval_f_padded(x_prime: &BitString, schedule: TimeSchedule) -> Result<(usize, OwfOutput)> {
    let min = input_len(1);
    let m = longest_valid_prefix(x_prime.len(), min, |m| n_for_input_len(m).is_some())
        .ok_or_else(|| Error::InvalidParams(format!("input of {} bits is below the minimum {min}", x_prime.len())))?;
    let n = n_for_input_len(m).expect("valid length");
    let input = OwfInput::from_bits(n, &x_prime.prefix(m))?;
    Ok((n, eval_f(&input, schedule.t(n))))
}

/// The full image of `f` at one `n`: input mass and smallest preimage per output.
#[derive(Debug)]
pub struct OwfImage {
    pub n: usize,
    pub t: u64,
    preimage: BTreeMap<OwfOutput, (BitString, u64)>,
}

impl OwfImage {
    pub fn build(n: usize, t: u64) -> Result<Self> {
        if n == 0 || n > MAX_OWF_BITS {
            return Err(Error::BudgetExceeded(format!("image census needs 1 <= n <= {MAX_OWF_BITS}, got {n}")));
        }
        let m = input_len(n);
        let outputs: Vec<OwfOutput> = (0..1u64 << m)
            .into_par_iter()
            .map(|v| eval_f(&OwfInput::from_bits(n, &BitString::from_u64(v, m)).expect("length m"), t))
            .collect();
        let mut preimage: BTreeMap<OwfOutput, (BitString, u64)> = BTreeMap::new();
        for (v, out) in outputs.into_iter().enumerate() {
            preimage.entry(out).or_insert_with(|| (BitString::from_u64(v as u64, m), 0)).1 += 1;
        }
        Ok(Self { n, t, preimage })
    }

    pub fn input_len(&self) -> usize {
        input_len(self.n)
    }

    /// Lexicographically smallest preimage.
    pub fn invert(&self, y: &OwfOutput) -> Option<OwfInput> {
        self.preimage.get(y).map(|(x, _)| OwfInput::from_bits(self.n, x).expect("stored with length m"))
    }

    /// Number of inputs mapping to `y`.
    pub fn mass(&self, y: &OwfOutput) -> u64 {
        self.preimage.get(y).map_or(0, |&(_, c)| c)
    }

    pub fn outputs(&self) -> impl Iterator<Item = (&OwfOutput, u64)> {
        self.preimage.iter().map(|(y, &(_, c))| (y, c))
    }

    pub fn image_size(&self) -> usize {
        self.preimage.len()
    }
}

/// Anything that proposes a preimage for an output of `f`.
pub trait Inverter: Sync {
    fn invert(&self, y: &OwfOutput) -> Option<OwfInput>;
}

#[derive(Clone, Debug)]
pub struct BruteForceInverter {
    image: Arc<OwfImage>,
}

impl BruteForceInverter {
    pub fn new(n: usize, t: u64) -> Result<Self> {
        Ok(Self { image: Arc::new(OwfImage::build(n, t)?) })
    }

    pub fn from_image(image: Arc<OwfImage>) -> Self {
        Self { image }
    }

    pub fn image(&self) -> &Arc<OwfImage> {
        &self.image
    }
}

impl Inverter for BruteForceInverter {
    fn invert(&self, y: &OwfOutput) -> Option<OwfInput> {
        self.image.invert(y)
    }
}

/// One-shot lexicographically smallest preimage, or `None` for ⊥.
pub fn brute_force_inverter(n: usize, t: u64, y: &OwfOutput) -> Result<Option<OwfInput>> {
    Ok(OwfImage::build(n, t)?.invert(y))
}

/// Returns ⊥ on a deny set and defers to `base` elsewhere.
#[derive(Clone, Debug)]
pub struct FailingInverter<I> {
    base: I,
    deny: HashSet<OwfOutput>,
}

impl<I: Inverter> Inverter for FailingInverter<I> {
    fn invert(&self, y: &OwfOutput) -> Option<OwfInput> {
        if self.deny.contains(y) {
            None
        } else {
            self.base.invert(y)
        }
    }
}

pub fn make_failing_inverter<I: Inverter>(base: I, deny: HashSet<OwfOutput>) -> FailingInverter<I> {
    FailingInverter { base, deny }
}

impl<T: Inverter + ?Sized> Inverter for &T {
    fn invert(&self, y: &OwfOutput) -> Option<OwfInput> {
        (**self).invert(y)
    }
}

impl<T: Inverter + ?Sized> Inverter for Box<T> {
    fn invert(&self, y: &OwfOutput) -> Option<OwfInput> {
        (**self).invert(y)
    }
}

/// `(k, witness)`: the first `i ∈ 1..=n+c` whose inverted `Π′[..i]` prints `z`,
/// or `(|z| + c, None)`.
pub fn heuristic_from_inverter<I: Inverter + ?Sized>(inverter: &I, z: &BitString, t: u64) -> (usize, Option<Program>) {
    let c = overhead_c();
    for i in 1..=z.len() + c {
        let query = OwfOutput { ell: i, y: Some(z.clone()) };
        if let Some(pre) = inverter.invert(&query) {
            if pre.pi_prime.len() < i {
                continue;
            }
            let Ok(p) = Program::new(pre.pi_prime.prefix(i)) else { continue };
            if run(&p, t).output() == Some(z) {
                return (i, Some(p));
            }
        }
    }
    (z.len() + c, None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub n: usize,
    pub t: u64,
    pub c: usize,
    /// `1/fail_r`: the largest `p` for which the heuristic errs on at least a `1/p` fraction.
    pub p_target: Option<Rational>,
    /// `2^{2c+3}·n·p²`.
    pub q_target: Option<Rational>,
    pub fail_r: Rational,
    pub inverter_fail: Rational,
    /// `fail_r / (n·2^{2c+1})`.
    pub required_fail: Rational,
    /// `inverter_fail / required_fail` when the right side is positive.
    pub slack: Option<Rational>,
    pub bound_holds: bool,
}

/// Exact `K^t` for every `z ∈ {0,1}^n`.
pub fn kt_lengths(n: usize, t: u64) -> Result<Vec<usize>> {
    let census = KtCensus::build(t, n)?;
    BitString::all(n).map(|z| census.kt(&z).map(|r| r.length)).collect()
}

/// Fraction of inputs on which the inverter does not return a preimage.
pub fn inverter_failure<I: Inverter + ?Sized>(inverter: &I, image: &OwfImage) -> Rational {
    let entries: Vec<(&OwfOutput, u64)> = image.outputs().collect();
    let failed: u64 = entries
        .par_iter()
        .map(|&(y, mass)| {
            let ok = inverter.invert(y).is_some_and(|x| x.n == image.n && eval_f(&x, image.t) == *y);
            if ok { 0 } else { mass }
        })
        .sum();
    Rational::new(BigInt::from(failed), BigInt::from(1u64) << image.input_len())
}

/// Both sides of the counting argument, exactly.
pub fn reduction_accounting<I: Inverter + ?Sized>(
    inverter: &I,
    image: &OwfImage,
    kt: &[usize],
) -> Result<ReductionReport> {
    let n = image.n;
    if kt.len() != 1 << n {
        return Err(Error::LengthMismatch { expected: 1 << n, actual: kt.len() });
    }
    let c = overhead_c();
    let wrong = BitString::all(n)
        .zip(kt)
        .par_bridge()
        .filter(|(z, &k)| heuristic_from_inverter(inverter, z, image.t).0 != k)
        .count();
    let fail_r = Rational::new(BigInt::from(wrong), BigInt::from(1u64) << n);
    let inverter_fail = inverter_failure(inverter, image);
    let required_fail = &fail_r / Rational::from_integer(BigInt::from(n) << (2 * c + 1));
    let bound_holds = inverter_fail >= required_fail;
    let p_target = (wrong > 0).then(|| fail_r.recip());
    let q_target = p_target.as_ref().map(|p| Rational::from_integer(BigInt::from(n) << (2 * c + 3)) * p * p);
    let slack = (wrong > 0).then(|| &inverter_fail / &required_fail);
    Ok(ReductionReport { n, t: image.t, c, p_target, q_target, fail_r, inverter_fail, required_fail, slack, bound_holds })
}

/// Lower bounds on the probability of outputs `(w ‖ z)` with `w = K^t(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputMassReport {
    pub checked: usize,
    /// Every such output has mass `≥ 2^{−⌈log(n+c)⌉}·2^{−w}`.
    pub holds_field_width: bool,
    /// Every such output has mass `≥ 2^{−n}/(n·2^{2c+1})`, the form the counting argument consumes.
    pub holds_counting: bool,
    /// Every such output has mass `≥ 2^{−w}/(n+c)`; fails whenever `n + c` is not a power of two.
    pub holds_uniform_length: bool,
}

pub fn output_mass_check(image: &OwfImage, kt: &[usize]) -> OutputMassReport {
    let n = image.n;
    let c = overhead_c();
    let m = image.input_len();
    let l = ell_bits(n);
    let mut report = OutputMassReport { checked: 0, holds_field_width: true, holds_counting: true, holds_uniform_length: true };
    for (z, &w) in BitString::all(n).zip(kt) {
        let mass = BigInt::from(image.mass(&OwfOutput { ell: w, y: Some(z) }));
        let total = BigInt::from(1u8) << m;
        report.checked += 1;
        report.holds_field_width &= (&mass << (l + w)) >= total;
        report.holds_counting &= &mass * (BigInt::from(n) << (n + 2 * c + 1)) >= total;
        report.holds_uniform_length &= (&mass << w) * BigInt::from(n + c) >= total;
    }
    report
}
