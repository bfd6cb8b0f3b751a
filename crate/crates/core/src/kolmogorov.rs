// SPDX-License-Identifier: Apache-2.0

//! Exact `K^t` by enumerating programs in order of length, then
//! lexicographically.
//!
//! Literal programs need no search: `0 ‖ x` is the only literal that outputs
//! `x`, and it is the lexicographically first program of its length. Among
//! instruction-mode programs the search covers every general body and the
//! builtin calls whose id is registered; calls to other ids are malformed.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::tinyvm::{encode_literal, run, MachineConfig, Program, RunResult, BUILTIN_FRAMING_BITS};

/// Longest program the default search will enumerate; covers every `|x| ≤ 16`.
pub const DEFAULT_BUDGET_BITS: usize = 17;

/// Hard ceiling on enumerated program length.
pub const MAX_PROGRAM_BITS: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KtResult {
    pub length: usize,
    pub witness: Program,
    pub time_bound_t: u64,
}

/// Instruction-mode programs of length `len` that may produce output, as
/// runs of consecutive values in lexicographic order.
fn instruction_runs(len: usize, ops: &[u8]) -> Vec<(u64, u64)> {
    let top = 1u64 << (len - 1);
    // general bodies: everything not opening with the builtin prefix
    let general = if len < 3 { top } else { 3 << (len - 3) };
    let mut runs = vec![(top, general)];
    if len >= BUILTIN_FRAMING_BITS {
        let rest = len - BUILTIN_FRAMING_BITS;
        runs.extend(ops.iter().map(|&op| (top | u64::from(op) << rest, 1u64 << rest)));
    }
    runs
}

fn program_at(value: u64, len: usize) -> Program {
    Program::new(BitString::from_u64(value, len)).expect("nonempty")
}

/// Lexicographically first instruction-mode program of length `len` printing `x`.
fn first_instruction_witness(x: &BitString, t: u64, len: usize, ops: &[u8]) -> Option<Program> {
    instruction_runs(len, ops).into_iter().find_map(|(start, count)| {
        (start..start + count)
            .into_par_iter()
            .map(|v| program_at(v, len))
            .find_first(|p| matches!(run(p, t), RunResult::Output(ref y) if y == x))
    })
}

/// `K^t(x)` with the default budget.
pub fn kt(x: &BitString, t: u64) -> Result<KtResult> {
    kt_with_budget(x, t, DEFAULT_BUDGET_BITS)
}

/// `K^t(x)`, refusing to enumerate programs longer than `budget_bits`.
pub fn kt_with_budget(x: &BitString, t: u64, budget_bits: usize) -> Result<KtResult> {
    let ops = MachineConfig::standard().live_ops();
    let max_len = x.len() + 1;
    for len in 1..=max_len {
        if len > budget_bits.min(MAX_PROGRAM_BITS) {
            return Err(Error::BudgetExceeded(format!(
                "K^t of a {}-bit string is not settled by programs of <= {budget_bits} bits",
                x.len()
            )));
        }
        if len == max_len && t >= x.len() as u64 {
            return Ok(KtResult { length: len, witness: encode_literal(x), time_bound_t: t });
        }
        if let Some(witness) = first_instruction_witness(x, t, len, &ops) {
            return Ok(KtResult { length: len, witness, time_bound_t: t });
        }
    }
    Err(Error::NoWitness { max_len, t })
}

/// `x ∈ MINK^t[s]`.
pub fn decide_mink(x: &BitString, t: u64, s: usize) -> Result<bool> {
    match kt(x, t) {
        Ok(r) => Ok(r.length <= s),
        Err(Error::NoWitness { max_len, .. }) if s <= max_len => Ok(false),
        Err(e) => Err(e),
    }
}

/// `|estimate − truth| ≤ beta`.
pub fn approx_ok(estimate: usize, truth: usize, beta: usize) -> bool {
    estimate.abs_diff(truth) <= beta
}

/// Shortest witnesses for every output of every instruction-mode program up
/// to a length cap, at a fixed step bound.
#[derive(Clone, Debug)]
pub struct KtCensus {
    t: u64,
    cap: usize,
    best: HashMap<BitString, Program>,
}

/// What a census knows about one string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KtLookup {
    Exact(KtResult),
    /// Every program of length `≤ cap` fails, and the census cannot see further.
    Above(usize),
}

impl KtCensus {
    pub fn build(t: u64, cap: usize) -> Result<Self> {
        if cap > MAX_PROGRAM_BITS.min(32) {
            return Err(Error::BudgetExceeded(format!("census of all programs up to {cap} bits")));
        }
        let ops = MachineConfig::standard().live_ops();
        let mut best: HashMap<BitString, Program> = HashMap::new();
        for len in 1..=cap {
            for (start, count) in instruction_runs(len, &ops) {
                // indexed collect keeps enumeration order, so the first hit is the minimum
                let outputs: Vec<Option<BitString>> = (start..start + count)
                    .into_par_iter()
                    .map(|v| match run(&program_at(v, len), t) {
                        RunResult::Output(y) => Some(y),
                        _ => None,
                    })
                    .collect();
                for (v, y) in (start..).zip(outputs) {
                    if let Some(y) = y {
                        best.entry(y).or_insert_with(|| program_at(v, len));
                    }
                }
            }
        }
        Ok(Self { t, cap, best })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn lookup(&self, x: &BitString) -> KtLookup {
        let literal = (self.t >= x.len() as u64).then(|| x.len() + 1);
        let found = self.best.get(x).filter(|p| p.len() <= x.len() + 1);
        let result = |length: usize, witness: Program| KtLookup::Exact(KtResult { length, witness, time_bound_t: self.t });
        match (found, literal) {
            (Some(p), Some(l)) if l <= p.len() => result(l, encode_literal(x)),
            (Some(p), _) => result(p.len(), p.clone()),
            // no instruction program up to cap; the literal is minimal if cap covers everything shorter
            (None, Some(l)) if self.cap + 1 >= l => result(l, encode_literal(x)),
            _ => KtLookup::Above(self.cap),
        }
    }

    /// Exact `K^t(x)` when the census settles it.
    pub fn kt(&self, x: &BitString) -> Result<KtResult> {
        match self.lookup(x) {
            KtLookup::Exact(r) => Ok(r),
            KtLookup::Above(cap) if cap > x.len() => Err(Error::NoWitness { max_len: x.len() + 1, t: self.t }),
            KtLookup::Above(_) => Err(Error::BudgetExceeded(format!(
                "census capped at {} bits cannot settle a {}-bit string",
                self.cap,
                x.len()
            ))),
        }
    }

    /// Number of distinct `n`-bit outputs of instruction programs shorter than `threshold`.
    fn count_short_outputs(&self, n: usize, threshold: usize) -> u64 {
        self.best.iter().filter(|(y, p)| y.len() == n && p.len() < threshold).count() as u64
    }
}

/// `|{x ∈ {0,1}^n : K^t(x) < threshold}|`.
pub fn count_low_complexity(n: usize, t: u64, threshold: usize) -> Result<u64> {
    if threshold == 0 {
        return Ok(0);
    }
    let census = KtCensus::build(t, threshold - 1)?;
    Ok(count_with(&census, n, threshold))
}

/// As [`count_low_complexity`], reusing a census whose cap is at least `threshold − 1`.
pub fn count_with(census: &KtCensus, n: usize, threshold: usize) -> u64 {
    assert!(threshold == 0 || census.cap + 1 >= threshold, "census too short for the threshold");
    if n + 1 < threshold && census.t >= n as u64 {
        // every string has its literal
        return 1u64 << n;
    }
    census.count_short_outputs(n, threshold)
}

/// Writes `x_hex,n,t,kt,witness_hex,witness_bits` for every `x ∈ {0,1}^n`.
/// Strings with no witness of length `≤ n + 1` get empty `kt` and witness fields.
pub fn write_kt_table<W: Write>(n: usize, t: u64, budget_bits: usize, mut w: W) -> Result<()> {
    if n + 1 > budget_bits {
        return Err(Error::BudgetExceeded(format!("kt table at n = {n} needs budget {}", n + 1)));
    }
    let census = KtCensus::build(t, n)?;
    writeln!(w, "x_hex,n,t,kt,witness_hex,witness_bits")?;
    for x in BitString::all(n) {
        match census.kt(&x) {
            Ok(r) => writeln!(
                w,
                "{},{n},{t},{},{},{}",
                x.to_hex(),
                r.length,
                r.witness.bits().to_hex(),
                r.witness.len()
            )?,
            Err(Error::NoWitness { .. }) => writeln!(w, "{},{n},{t},,,", x.to_hex())?,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// The unoptimized search: every bitstring of every length, in order.
pub mod reference {
    use super::*;

    pub fn kt(x: &BitString, t: u64) -> Option<KtResult> {
        (1..=x.len() + 1).find_map(|len| {
            BitString::all(len)
                .map(|bits| Program::new(bits).expect("len >= 1"))
                .find(|p| run(p, t) == RunResult::Output(x.clone()))
                .map(|witness| KtResult { length: len, witness, time_bound_t: t })
        })
    }
}
