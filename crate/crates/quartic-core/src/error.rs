//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial is reducible: {0}")]
    NotAField(String),
    #[error("unsupported degree {0} (expected 2 or 4)")]
    UnsupportedDegree(usize),
    #[error("root isolation failed at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("prime {0} is decomposed in the field")]
    FieldNotInC(u64),
    #[error("invalid prime set: {0}")]
    InvalidS(String),
    #[error("unit search budget exhausted; regulator lower bound {lower_bound}")]
    SearchBudgetExhausted { lower_bound: f64 },
    #[error("numeric inconsistency: {0}")]
    NumericInconsistency(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unit is torsion, no geodesic")]
    NotAGeodesic,
    #[error("eigenvalue shape violation: {0}")]
    ShapeViolation(String),
    #[error("correspondence violation in {identity}: {detail}")]
    CorrespondenceViolation { identity: String, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
