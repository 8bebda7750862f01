//! Manufactured solutions, convergence studies, and randomized verification
//! of the geometric lemmas and stability hypotheses.

mod cases;
mod convergence;
mod lemmas;
mod sampling;
mod stability;

use thiserror::Error;

use crate::dual::DualError;
use crate::mesh::MeshError;
use crate::solver::SolverError;

pub use cases::{case_ids, cases, find_case, rhombus_coordinates, ManufacturedCase};
pub use convergence::{
    convergence_study, error_norms, observed_rate, run_level, ConvergenceReport, ErrorNorms, LevelResult, Rates,
};
pub use lemmas::{checks, lemma_suite, run_check, CheckReport, Outcome, SuiteReport, INEQUALITY_GUARD};
pub use sampling::{item_rng, random_acute_triangle, random_triangle, MIN_SAMPLED_ANGLE};
pub use stability::{stability_check, StabilityReport, H3_TOLERANCE};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("mesh violates the angle conditions on edges {offending_edges:?}")]
    Inadmissible { offending_edges: Vec<usize> },
    #[error("a convergence study needs at least two levels, got {0}")]
    TooFewLevels(usize),
    #[error("levels must be positive and strictly increasing, got {0:?}")]
    LevelsNotIncreasing(Vec<usize>),
    #[error("at least one sample is required")]
    NoSamples,
}
