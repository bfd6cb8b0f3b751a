// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prg::expander::Expander;
use crate::prg::CondEpPrg;

/// A length-increasing map usable as the inner generator of [`rate1_pad`].
pub trait Generator {
    fn output_len(&self, seed_len: usize) -> usize;
    fn generate(&self, seed: &BitString) -> Result<BitString>;
}

impl Generator for Expander {
    fn output_len(&self, seed_len: usize) -> usize {
        Expander::output_len(self, seed_len)
    }

    fn generate(&self, seed: &BitString) -> Result<BitString> {
        Ok(self.eval(seed))
    }
}

/// Split of an `n`-bit seed into a pass-through prefix and an expanded suffix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rate1Params {
    pub n: usize,
    pub c0: u32,
    /// `4·c0`.
    pub delta_prime: u32,
    /// `2·c0·γ`.
    pub gamma_prime_outer: u32,
    /// `|s1| = ⌈n^{1/(2c0)}⌉`.
    pub s1_len: usize,
}

impl Rate1Params {
    pub fn new(n: usize, c0: u32, gamma: u32) -> Result<Self> {
        if c0 == 0 || n == 0 {
            return Err(Error::InvalidParams(format!("rate-1 split needs n, c0 >= 1 (n = {n}, c0 = {c0})")));
        }
        // smallest m with m^{2c0} >= n
        let mut s1_len = 1usize;
        while (s1_len as f64).powi(2 * c0 as i32) < n as f64 {
            s1_len += 1;
        }
        Self::with_split(n, c0, gamma, s1_len)
    }

    pub fn with_split(n: usize, c0: u32, gamma: u32, s1_len: usize) -> Result<Self> {
        if s1_len == 0 || s1_len > n {
            return Err(Error::InvalidParams(format!("suffix length {s1_len} outside 1..={n}")));
        }
        Ok(Self { n, c0, delta_prime: 4 * c0, gamma_prime_outer: 2 * c0 * gamma, s1_len })
    }

    pub fn s0_len(&self) -> usize {
        self.n - self.s1_len
    }
}

/// `s0 ‖ G′(s1)` for `s = s0 ‖ s1`.
pub fn rate1_pad<G: Generator + ?Sized>(inner: &G, s: &BitString, split: &Rate1Params) -> Result<BitString> {
    if s.len() != split.n {
        return Err(Error::LengthMismatch { expected: split.n, actual: s.len() });
    }
    let mut out = s.prefix(split.s0_len());
    out.extend_from(&inner.generate(&s.slice(split.s0_len(), s.len()))?);
    Ok(out)
}

/// A function defined only on some input lengths.
pub trait LengthFamily {
    fn is_valid_len(&self, len: usize) -> bool;
    fn min_len(&self) -> usize;
    fn apply(&self, x: &BitString) -> Result<BitString>;
}

/// Largest valid length `≤ len`, scanning down to `min`.
pub fn longest_valid_prefix(len: usize, min: usize, valid: impl Fn(usize) -> bool) -> Option<usize> {
    (min..=len).rev().find(|&m| valid(m))
}

/// `g(x) ‖ y` where `x` is the longest valid prefix of `x′ = x ‖ y`.
pub fn all_lengths_wrapper<F: LengthFamily + ?Sized>(g: &F, x_prime: &BitString) -> Result<BitString> {
    let m = longest_valid_prefix(x_prime.len(), g.min_len(), |m| g.is_valid_len(m)).ok_or_else(|| {
        Error::InvalidParams(format!("input of {} bits is below the minimum {}", x_prime.len(), g.min_len()))
    })?;
    let mut out = g.apply(&x_prime.prefix(m))?;
    out.extend_from(&x_prime.slice(m, x_prime.len()));
    Ok(out)
}

impl LengthFamily for CondEpPrg {
    fn is_valid_len(&self, len: usize) -> bool {
        len == self.params.n_prime
    }

    fn min_len(&self) -> usize {
        self.params.n_prime
    }

    fn apply(&self, x: &BitString) -> Result<BitString> {
        self.eval(x)
    }
}

/// Instances of the construction for several `n`; valid lengths are their `n′`.
impl LengthFamily for [CondEpPrg] {
    fn is_valid_len(&self, len: usize) -> bool {
        self.iter().any(|g| g.params.n_prime == len)
    }

    fn min_len(&self) -> usize {
        self.iter().map(|g| g.params.n_prime).min().unwrap_or(usize::MAX)
    }

    fn apply(&self, x: &BitString) -> Result<BitString> {
        self.iter()
            .find(|g| g.params.n_prime == x.len())
            .ok_or(Error::InvalidParams(format!("no instance with input length {}", x.len())))?
            .eval(x)
    }
}
