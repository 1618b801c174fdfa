use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::LatticeViolation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: BigInt },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(LatticeViolation),

    #[error("malformed braid word: {0}")]
    MalformedWord(String),

    #[error("conjugation matrix is not an involution (first defect at ({row}, {col}))")]
    NotInvolution { row: usize, col: usize },

    #[error("block structure violated at ({row}, {col}): {reason}")]
    BlockStructure { row: usize, col: usize, reason: String },

    #[error("inconsistent instance: {0}")]
    Inconsistent(String),

    #[error("unsupported for even n+i = {parity}: the thimble index sum is not determined by vanishing-cycle data in that case")]
    EvenParity { parity: i64 },

    #[error("signature half-difference is not integral: {0}")]
    NonIntegral(String),

    #[error("no consistent instance found after {attempts} attempts")]
    SearchExhausted { attempts: usize },

    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
