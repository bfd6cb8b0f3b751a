// SPDX-License-Identifier: Apache-2.0

//! Exact, enumeration-based experiments on time-bounded Kolmogorov
//! complexity and one-way-function constructions.
//!
//! Everything runs over one fixed toy machine ([`tinyvm`]) at sizes where
//! every distribution can be enumerated, so statistical distances are exact
//! rationals and entropies are sums over explicit supports.
//!
//! | module | contents |
//! |--------|----------|
//! | [`tinyvm`] | the step-counted two-mode machine |
//! | [`kolmogorov`] | exact `K^t`, `MINK^t[s]`, low-complexity counts |
//! | [`owf`] | the `K^t`-based OWF candidate and the inverter-to-heuristic reduction |
//! | [`hashing`] | affine hashing over GF(2^n), truncation, leftover hash checks |
//! | [`hardcore`] | Goldreich–Levin inner-product bits |
//! | [`prg`] | regularity, the hashed dense function, the condEP-PRG, rate-1 padding |
//! | [`stats`] | exact distributions, SD, entropies |
//! | [`distinguisher`] | the `K^t`-heuristic distinguisher and its counting checks |
//! | [`experiments`] | reports, configs and the commands behind the `ktlab` binary |
//!
//! The `examples/` directory has one runnable program per capability:
//! `kt_table`, `mink_counting`, `owf_reduction`, `universal_hashing`,
//! `goldreich_levin`, `regularity`, `cond_ep_prg`, `rate1_padding`,
//! `distinguisher`, `exact_stats` and `reports`.

pub mod bits;
pub mod distinguisher;
pub mod error;
pub mod experiments;
pub mod hardcore;
pub mod hashing;
pub mod kolmogorov;
pub mod owf;
pub mod prg;
pub mod stats;
pub mod tinyvm;

pub use bits::BitString;
pub use error::{Error, Result};
pub use stats::{ExactDistribution, Rational};
pub use tinyvm::{Program, RunResult};
