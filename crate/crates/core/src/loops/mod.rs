//! Iterated loop algebras: Laurent elements, towers of twisted stages,
//! finite windows onto them, and the canonical form over `{z^i : i in I_n}`.

mod canonical;
mod laurent;
mod tower;

pub use canonical::{canonical_form, free_basis_check, index_set, inherited_flags, CanonicalForm, FlagStatus, FreeBasisReport, InheritedFlag, InheritedFlags};
pub use laurent::{box_degrees, laurent_multiply, monomial_string, Degree, LaurentElement};
pub use tower::{multiloop, DegreeBox, LoopTower, Stage, ToralMonomialAuto, TowerOrigin};

use thiserror::Error;

use crate::exactnum::FieldError;
use crate::grading::GradingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("stage {stage}: root is not a primitive root of unity")]
    NotPrimitive { stage: usize },
    #[error("automorphisms {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("stage {stage}: automorphism period {period} does not divide modulus {modulus}")]
    PeriodMismatch { stage: usize, period: u64, modulus: u64 },
    #[error("stage {stage}: twist does not stabilize the previous stage (checked on box {radius:?})")]
    NotStabilizing { stage: usize, radius: Vec<i64> },
    #[error("stage {stage}: twist raised to the modulus {modulus} is not the identity on box {radius:?}")]
    WrongPeriod { stage: usize, modulus: u64, radius: Vec<i64> },
    #[error("invalid variable action: {0}")]
    BadMonomial(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}
