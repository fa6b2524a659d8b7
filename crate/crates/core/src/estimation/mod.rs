//! Estimation on empirical data: θ fitting, rankings and smoothing.

mod fit;
mod ranking;
mod series;
mod smoothing;

use thiserror::Error;

use crate::asymptote::AsymptoteError;
use crate::histogram::HistogramError;

pub use fit::{default_tail_start, fit_theta, FitModel, ThetaFit, MIN_TAIL_POINTS};
pub use ranking::{build_ranking, RankingCriteria};
pub use series::{rank_series_from_counts, RankFrequencySeries, RankPoint};
pub use smoothing::{
    default_geometric_p, fill_gaps, geometric_tail_smooth, good_turing_smooth, reestimate_table,
    SmoothedDistribution, SmoothingMethod, SpeciesProbability,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("no species observed")]
    EmptyCounts,
    #[error("invalid rank-frequency series: {0}")]
    InvalidSeries(String),
    #[error("need at least {needed} points at rank >= {tail_start}, got {got}")]
    TooFewTailPoints {
        needed: usize,
        got: usize,
        tail_start: u64,
    },
    #[error("tail frequencies are constant; no slope to fit")]
    DegenerateTail,
    #[error("fit failed: power-law exponent beta = {0} is not positive")]
    NonPositiveBeta(f64),
    #[error("fit failed: exponential rate lambda = {0} is not positive")]
    NonPositiveRate(f64),
    #[error("no singletons (N_1 = 0); unseen mass is undefined")]
    NoSingletons,
    #[error("every species is a singleton; no mass is left for seen species")]
    AllSingletons,
    #[error("default geometric p = 1/N_1 needs N_1 >= 2, got N_1 = {0}")]
    NoDefaultP(u64),
    #[error("ranking does not match counts: {0}")]
    RankingMismatch(String),
    #[error("head size {head} exceeds species count {species}")]
    HeadTooLarge { head: usize, species: usize },
    #[error(transparent)]
    Asymptote(#[from] AsymptoteError),
    #[error(transparent)]
    Histogram(#[from] HistogramError),
}
