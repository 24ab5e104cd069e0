//! Exhaustive searches, family sweeps and the checks behind them.

pub mod checks;
pub mod known;
pub mod lemmas;
pub mod linearized;
pub mod sweep;
pub mod tables;

use thiserror::Error;

use crate::construct::ConstructError;
use crate::criterion::CriterionError;
use crate::ff::FieldError;
use crate::poly::PolyError;

pub use known::{known_entries, verify_known, KnownEntry, KnownOutcome};
pub use linearized::{check_linearized_perm, classify_linearized, ClassifyReport, LinearShape};
pub use sweep::{verify_family_sweep, SweepOptions, SweepRecord, SweepReport};
pub use tables::{search_monomial_even, search_monomial_odd, SearchResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("the two routes disagree on row {row} at k={k}: g permutes μ = {direct}, L permutes T = {via_l}")]
    VerdictMismatch { row: u8, k: u32, direct: bool, via_l: bool },
    #[error("{0} characteristic required")]
    Characteristic(&'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
}
