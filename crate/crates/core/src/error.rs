use alloc::string::String;

use crate::fockspace::Mode;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid truncation d_x={d_x}, d_y={d_y}: both must be at least 1")]
    InvalidTruncation { d_x: usize, d_y: usize },

    #[error("Fock index {n} out of range for mode {mode:?} with truncation {dim}")]
    FockIndexOutOfRange { mode: Mode, n: usize, dim: usize },

    #[error("operands live in different spaces")]
    SpaceMismatch,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operator is not Hermitian (max residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("para-particle order must be even and at least 2, got {0}")]
    InvalidOrder(u32),

    #[error("para-Fermi models only have the spin-down vacuum branch")]
    InvalidBranch,

    #[error("truncation too small: mode {mode:?} needs {needed} levels, has {available}")]
    TruncationTooSmall { mode: Mode, needed: usize, available: usize },

    #[error("ladder depth {depth} exceeds the maximum {max}")]
    LadderDepth { depth: usize, max: usize },

    #[error("raising rung {rung} would leave the truncated space")]
    TruncationOverflow { rung: usize },

    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("time grid must be sorted and non-negative (offending index {index})")]
    InvalidTimeGrid { index: usize },

    #[error("integration failed at t = {time:e} s")]
    StepFailure { time: f64 },

    #[error("truncation leakage {population:e} exceeds threshold at t = {time:e} s")]
    LeakageExceeded { time: f64, population: f64 },

    #[error("readout scan is empty")]
    EmptyScan,

    #[error("fit of scan {scan} did not converge")]
    FitDidNotConverge { scan: usize },
}
