// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown builtin id 0x{0:02x}")]
    UnknownBuiltin(u8),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no program of length <= {max_len} outputs the string within {t} steps")]
    NoWitness { max_len: usize, t: u64 },

    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
