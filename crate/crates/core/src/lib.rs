//! Local frequency reestimation and the rank-frequency laws it implies.
//!
//! The crate is organised around a single family of reestimation formulas,
//!
//! ```text
//! x* = (x + θ) · N_{x+1} / N_x
//! ```
//!
//! where `N_x` is the number of species seen exactly `x` times. `θ = 1` is
//! Turing's formula, `θ = 2` is the local form of Zipf's law, and every other
//! real `θ` pairs with a power-law asymptote `f(r) = C · r^(-1/(θ-1))`.
//!
//! Modules:
//!
//! - [`histogram`]: species counts, frequency-of-frequencies tables, the
//!   rank/histogram duality and the reestimation formula itself.
//! - [`asymptote`]: closed-form rank-frequency laws, cumulatives, the geometric
//!   pmf and the convergence-region classifier.
//! - [`estimation`]: fitting θ from rank-frequency data, Good-Turing smoothing,
//!   tie-breaking rankings and geometric-tail smoothing.
//! - [`verification`]: numeric sweeps of the analytic error bounds and
//!   convergence claims.
//! - [`simulation`]: seeded sampling from truncated asymptotic populations.
//! - [`ingest`]: text to species counts.

// `!(a > b)` is used on purpose so NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptote;
pub mod estimation;
pub mod histogram;
pub mod ingest;
pub mod quadrature;
pub mod simulation;
pub mod verification;

pub use asymptote::{AsymptoteError, AsymptoteSpec};
pub use estimation::{
    EstimationError, FitModel, RankFrequencySeries, RankingCriteria, SmoothedDistribution,
    SmoothingMethod, ThetaFit,
};
pub use histogram::{FrequencyHistogram, HistogramError, SpeciesCounts, ThetaParam};
pub use ingest::{CorpusConfig, IngestError, Tokenizer};
pub use simulation::{PopulationModel, SimulationError};
pub use verification::{BoundReport, BoundRow, VerificationError};
