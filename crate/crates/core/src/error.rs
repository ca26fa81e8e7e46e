//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layers.
///
/// `ContradictionDiagnostic` is reserved for situations where a verified
/// structural identity fails on concrete data: it always indicates either a
/// bug in this crate or an incorrect statement, never bad user input, and the
/// CLI maps it to a nonzero exit code.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("group size cap exceeded: |GL({n}, F_{p})| = {order} > {cap}")]
    SizeCap { n: usize, p: u32, order: u64, cap: u64 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("non-unit inversion: {0}")]
    NonUnit(String),

    #[error("element is not in {region}: {detail}")]
    NotInRegion { region: String, detail: String },

    #[error("element is not strictly positive for the given Levi: {0}")]
    NotStrictlyPositive(String),

    #[error("insufficient enumeration depth: need {needed}, have {have}")]
    DepthInsufficient { needed: i64, have: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("seed module inventory exhausted before classification completed: {0}")]
    IncompleteInventory(String),

    #[error("structural identity failed on concrete data: {0}")]
    ContradictionDiagnostic(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
