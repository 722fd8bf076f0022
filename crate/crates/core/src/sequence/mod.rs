//! Orbit tables, recurrence and closed-form fitting, and the affine index engine.

mod affine;
mod closed_form;
pub mod emit;
mod orbit;
mod recurrence;
mod validate;

pub use affine::AffineSystem;
pub use closed_form::{fit_closed_form, ClosedForm};
pub use orbit::{
    default_max_terms, preflight_seed, run_orbit, seed_conflicts, OrbitRow, OrbitTable, DEFAULT_MAX_TERMS,
    MAX_TERMS_ENV,
};
pub use recurrence::{berlekamp_massey, fit_recurrence, order_contradicted, LinearRecurrence, RootProfile};
pub use validate::{cross_validate, CrossReport, Mismatch};

use crate::birmap::MapError;
use crate::blowup::ChartError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("need at least {need} terms, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("no linear recurrence of order at most {max_order} fits")]
    NoRecurrence { max_order: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("table has no row {0}")]
    MissingRow(usize),
    #[error("unknown state label {0:?}")]
    UnknownLabel(String),
    #[error("exact horizon {exact} exceeds fast horizon {fast}")]
    Horizon { exact: usize, fast: usize },
    #[error("no linear form with small prime coefficients avoids every chart")]
    NoGenericSeed,
}
