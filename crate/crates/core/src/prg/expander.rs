// SPDX-License-Identifier: Apache-2.0

//! The frozen toy generator behind the machine's builtin table.
//!
//! `E_γ(s) = s ‖ GL(s, R_{|s|})` where `R_L` is a fixed list of
//! `γ·⌈log L⌉` vectors of `L` bits drawn from a ChaCha stream keyed by `L`.
//! The truncated variant drops the last `trunc` bits of that output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{ceil_log2, BitString};
use crate::hardcore::{gl, GlSeed};

const ROW_STREAM_KEY: u64 = 0x6b74_6c61_625f_6731;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expander {
    pub gamma: u32,
    pub trunc: usize,
}

impl Expander {
    pub fn new(gamma: u32, trunc: usize) -> Self {
        Self { gamma, trunc }
    }

    /// Bits appended to a seed of length `seed_len` before truncation.
    pub fn stretch(&self, seed_len: usize) -> usize {
        if seed_len <= 1 {
            0
        } else {
            self.gamma as usize * ceil_log2(seed_len as u64) as usize
        }
    }

    pub fn output_len(&self, seed_len: usize) -> usize {
        (seed_len + self.stretch(seed_len)).saturating_sub(self.trunc)
    }

    /// The fixed GL vectors for seeds of length `seed_len`.
    pub fn rows(&self, seed_len: usize) -> GlSeed {
        let mut rng = ChaCha8Rng::seed_from_u64(ROW_STREAM_KEY ^ seed_len as u64);
        let rows = (0..self.stretch(seed_len))
            .map(|_| (0..seed_len).map(|_| rng.gen::<bool>()).collect())
            .collect();
        GlSeed::new(rows).expect("rows share the seed length")
    }

    pub fn eval(&self, s: &BitString) -> BitString {
        let mut out = s.clone();
        out.extend_from(&gl(s, &self.rows(s.len())).expect("rows match the seed length"));
        out.prefix(self.output_len(s.len()))
    }
}
