//! Configured, seeded experiment runs and their reports.
//!
//! A run is described by an [`ExperimentConfig`] (TOML sections
//! `experiment`, `generator`, `class`, `params`) and produces a
//! [`RunReport`] holding the config echo, exact and float metrics, bound
//! values, swept grids and pass/fail verdicts. Trial `i` of a run draws from
//! stream `i` (or `i + 1` where stream 0 fixes shared state) of the seed, and
//! results are reduced in trial order, so reports are reproducible for any
//! thread count.

mod config;
mod report;
mod runners;

pub use config::{
    parse_rational, ClassSection, ExperimentConfig, ExperimentKind, ExperimentSection, Params, RationalInput,
    DEFAULT_TRIALS,
};
pub use report::{GridPoint, Metric, MetricValue, RunReport, Verdict, CSV_COLUMNS};
pub use runners::run;

use thiserror::Error;

use crate::bounds::BoundError;
use crate::estimators::EstimatorError;
use crate::generators::GeneratorError;
use crate::hypothesis::HypothesisError;
use crate::logic::LogicError;
use crate::numerics::NumericsError;
use crate::sampling::SamplingError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Hypothesis(#[from] HypothesisError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
