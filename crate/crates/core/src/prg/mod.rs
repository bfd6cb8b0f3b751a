// SPDX-License-Identifier: Apache-2.0

//! From a toy one-way function to a conditionally entropy-preserving PRG.
//!
//! The pipeline: profile the function's regularity ([`find_regularity`]),
//! hash it down to a dense function ([`dense_f`]), append Goldreich–Levin
//! bits ([`cond_ep_prg`]) and finally stretch to rate one ([`rate1_pad`]) or
//! to all input lengths ([`all_lengths_wrapper`]).

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stats::{rational, Rational};

mod construction;
pub mod exact;
pub mod expander;
mod rate1;

pub use construction::{
    cond_ep_prg, dense_f, event_member, CondEpPrg, CondEpPrgSpec, EventSpec, PrgConfig, PrgParams, SeedBundle,
};
pub use rate1::{all_lengths_wrapper, longest_valid_prefix, rate1_pad, Generator, LengthFamily, Rate1Params};

/// Largest input length for which toy functions are tabulated.
pub const MAX_TOY_BITS: usize = 16;

const RANDOM_FUNCTION_SEED: u64 = 0x5eed_0001;
const RANDOM_PERMUTATION_SEED: u64 = 0x5eed_0002;

/// Names accepted by [`ToyOwf::by_name`].
pub const TOY_OWF_NAMES: [&str; 6] =
    ["identity", "constant", "clear-last-bit", "mult", "random-function", "random-permutation"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToyOwfKind {
    Identity,
    Constant,
    ClearLastBit,
    /// Product of the first `⌊n/2⌋` bits and the last `⌈n/2⌉` bits as integers.
    Mult,
    RandomFunction,
    RandomPermutation,
}

/// A length-preserving function on `{0,1}^n`. None of these is one-way.
#[derive(Clone, Debug)]
pub struct ToyOwf {
    kind: ToyOwfKind,
    n: usize,
    table: Option<Arc<Vec<u32>>>,
}

impl ToyOwf {
    pub fn new(kind: ToyOwfKind, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_TOY_BITS {
            return Err(Error::InvalidParams(format!("toy functions need 1 <= n <= {MAX_TOY_BITS}, got {n}")));
        }
        let size = 1usize << n;
        let table = match kind {
            ToyOwfKind::RandomFunction => {
                let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_FUNCTION_SEED ^ n as u64);
                Some(Arc::new((0..size).map(|_| rng.gen_range(0..size as u32)).collect()))
            }
            ToyOwfKind::RandomPermutation => {
                let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_PERMUTATION_SEED ^ n as u64);
                let mut perm: Vec<u32> = (0..size as u32).collect();
                perm.shuffle(&mut rng);
                Some(Arc::new(perm))
            }
            _ => None,
        };
        Ok(Self { kind, n, table })
    }

    pub fn by_name(name: &str, n: usize) -> Result<Self> {
        let kind = match name {
            "identity" => ToyOwfKind::Identity,
            "constant" => ToyOwfKind::Constant,
            "clear-last-bit" => ToyOwfKind::ClearLastBit,
            "mult" => ToyOwfKind::Mult,
            "random-function" => ToyOwfKind::RandomFunction,
            "random-permutation" => ToyOwfKind::RandomPermutation,
            _ => return Err(Error::UnknownName(name.to_string())),
        };
        Self::new(kind, n)
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ToyOwfKind::Identity => "identity",
            ToyOwfKind::Constant => "constant",
            ToyOwfKind::ClearLastBit => "clear-last-bit",
            ToyOwfKind::Mult => "mult",
            ToyOwfKind::RandomFunction => "random-function",
            ToyOwfKind::RandomPermutation => "random-permutation",
        }
    }

    pub fn kind(&self) -> ToyOwfKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn eval_u32(&self, x: u32) -> u32 {
        match self.kind {
            ToyOwfKind::Identity => x,
            ToyOwfKind::Constant => 0,
            ToyOwfKind::ClearLastBit => x & !1,
            ToyOwfKind::Mult => {
                let low = self.n.div_ceil(2);
                (x >> low) * (x & ((1 << low) - 1))
            }
            ToyOwfKind::RandomFunction | ToyOwfKind::RandomPermutation => {
                self.table.as_ref().expect("tabulated")[x as usize]
            }
        }
    }

    pub fn eval(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: x.len() });
        }
        Ok(BitString::from_u64(u64::from(self.eval_u32(x.to_u64() as u32)), self.n))
    }

    /// `|f^{-1}(y)|` for every `y`, indexed by `y`.
    pub fn image_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; 1 << self.n];
        for x in 0..1u32 << self.n {
            counts[self.eval_u32(x) as usize] += 1;
        }
        counts
    }
}

/// A regularity level together with the inputs achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityProfile {
    pub n: usize,
    pub r: usize,
    /// `S_n`, sorted.
    pub members: Vec<u32>,
    pub weight: Rational,
}

impl RegularityProfile {
    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn member_bits(&self) -> impl Iterator<Item = BitString> + '_ {
        self.members.iter().map(move |&x| BitString::from_u64(u64::from(x), self.n))
    }

    /// `⌊log |S_n|⌋`.
    pub fn log_size_floor(&self) -> usize {
        (usize::BITS - 1 - self.members.len().leading_zeros()) as usize
    }
}

/// Whether a preimage count sits in bucket `i`: `2^{i−1} ≤ count ≤ 2^i`,
/// which for `i = 0` means exactly one preimage.
pub fn in_bucket(count: u32, i: usize) -> bool {
    let count = u64::from(count);
    if i == 0 {
        count == 1
    } else {
        (1u64 << (i - 1)) <= count && count <= 1u64 << i
    }
}

/// Smallest `i ∈ 0..=n` maximizing the fraction of inputs in bucket `i`.
pub fn find_regularity(f: &ToyOwf) -> RegularityProfile {
    let n = f.n;
    let counts = f.image_counts();
    let pre: Vec<u32> = (0..1u32 << n).map(|x| counts[f.eval_u32(x) as usize]).collect();
    let mut weights = vec![0usize; n + 1];
    for &c in &pre {
        for (i, w) in weights.iter_mut().enumerate() {
            if in_bucket(c, i) {
                *w += 1;
            }
        }
    }
    let best = *weights.iter().max().expect("n + 1 buckets");
    let r = weights.iter().position(|&w| w == best).expect("maximum is attained");
    let members: Vec<u32> = (0..1u32 << n).filter(|&x| in_bucket(pre[x as usize], r)).collect();
    RegularityProfile { n, r, weight: rational(members.len() as i64, 1i64 << n), members }
}

/// Guarantees of a profile: enough mass, and every member's
/// preimage count inside bucket `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    /// `weight ≥ 1/n`.
    pub weight_holds: bool,
    /// `2^{r−1} ≤ |f^{−1}(f(x))| ≤ 2^r` for every member `x`.
    pub preimage_holds: bool,
}

impl RegularityVerdict {
    pub fn holds(&self) -> bool {
        self.weight_holds && self.preimage_holds
    }
}

pub fn regularity_check(f: &ToyOwf, profile: &RegularityProfile) -> RegularityVerdict {
    let counts = f.image_counts();
    let r = profile.r as u32;
    let preimage_holds = profile.members.iter().all(|&x| {
        let c = u64::from(counts[f.eval_u32(x) as usize]);
        // 2^{r−1} ≤ c, written as 2^r ≤ 2c
        (1u64 << r) <= 2 * c && c <= 1u64 << r
    });
    RegularityVerdict { weight_holds: profile.weight >= rational(1, f.n as i64), preimage_holds }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in TOY_OWF_NAMES {
            assert_eq!(ToyOwf::by_name(name, 6).unwrap().name(), name);
        }
        assert!(ToyOwf::by_name("sha256", 6).is_err());
        assert!(ToyOwf::new(ToyOwfKind::Identity, 17).is_err());
    }

    #[test]
    fn mult_is_a_product_of_halves() {
        let f = ToyOwf::new(ToyOwfKind::Mult, 5).unwrap();
        // 10 ‖ 111 → 2 · 7
        assert_eq!(f.eval(&BitString::parse("10111").unwrap()).unwrap(), BitString::from_u64(14, 5));
    }

    #[test]
    fn permutation_is_bijective() {
        let f = ToyOwf::new(ToyOwfKind::RandomPermutation, 8).unwrap();
        assert!(f.image_counts().iter().all(|&c| c == 1));
    }

    #[test]
    fn tables_are_reproducible() {
        let a = ToyOwf::new(ToyOwfKind::RandomFunction, 7).unwrap();
        let b = ToyOwf::new(ToyOwfKind::RandomFunction, 7).unwrap();
        assert!((0..128).all(|x| a.eval_u32(x) == b.eval_u32(x)));
    }

    #[test]
    fn regularity_examples() {
        let id = find_regularity(&ToyOwf::new(ToyOwfKind::Identity, 5).unwrap());
        assert_eq!((id.r, id.members.len(), id.weight.clone()), (0, 32, rational(1, 1)));
        let c = find_regularity(&ToyOwf::new(ToyOwfKind::Constant, 5).unwrap());
        assert_eq!((c.r, c.weight), (5, rational(1, 1)));
        let clb = find_regularity(&ToyOwf::new(ToyOwfKind::ClearLastBit, 5).unwrap());
        assert_eq!((clb.r, clb.weight), (1, rational(1, 1)));
    }

    #[test]
    fn every_shipped_function_is_regular_somewhere() {
        for name in TOY_OWF_NAMES {
            for n in [2, 5, 9] {
                let f = ToyOwf::by_name(name, n).unwrap();
                let v = regularity_check(&f, &find_regularity(&f));
                assert!(v.holds(), "{name} at n = {n}: {v:?}");
            }
        }
    }

    #[test]
    fn check_rejects_a_wrong_level() {
        let f = ToyOwf::new(ToyOwfKind::Constant, 4).unwrap();
        let mut p = find_regularity(&f);
        p.r = 2;
        assert!(!regularity_check(&f, &p).preimage_holds);
    }

    #[test]
    fn bucket_edges() {
        assert!(in_bucket(1, 0) && in_bucket(1, 1) && !in_bucket(2, 0));
        assert!(in_bucket(2, 1) && in_bucket(2, 2) && !in_bucket(5, 2) && in_bucket(5, 3));
    }
}
