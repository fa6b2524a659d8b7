//! Species counts and frequency-of-frequencies tables.
//!
//! A [`FrequencyHistogram`] maps a frequency count `x` to `N_x`, the number of
//! species observed exactly `x` times. Values are real so that analytic
//! populations built from the recurrence `N_{x+1} = x/(x+θ) · N_x` can be
//! represented next to empirical ones.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HistogramError {
    #[error("frequency count must be >= 1, got {0}")]
    ZeroFrequency(u64),
    #[error("N_{x} must be finite and non-negative, got {value}")]
    InvalidCell { x: u64, value: f64 },
    #[error("species '{0}' has count 0; counts must be >= 1")]
    ZeroCount(String),
    #[error("reestimate undefined at x = {0}: N_x is zero or absent")]
    UndefinedReestimate(u64),
    #[error("theta must be finite, got {0}")]
    NonFiniteTheta(f64),
    #[error("ideal histogram requires theta > 0, got {0}")]
    NonPositiveTheta(f64),
    #[error("ideal histogram requires n1 > 0 and finite, got {0}")]
    InvalidSeed(f64),
    #[error("ideal histogram requires X >= 1")]
    EmptyRange,
}

/// Real-valued reestimation parameter. `θ = 1` is Turing, `θ = 2` is Zipf.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaParam(f64);

impl ThetaParam {
    pub const TURING: ThetaParam = ThetaParam(1.0);
    pub const ZIPF: ThetaParam = ThetaParam(2.0);

    pub fn new(theta: f64) -> Result<Self, HistogramError> {
        if theta.is_finite() {
            Ok(ThetaParam(theta))
        } else {
            Err(HistogramError::NonFiniteTheta(theta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `α = θ - 1`, the exponent offset used by the power-law bounds.
    pub fn alpha(self) -> f64 {
        self.0 - 1.0
    }
}

impl fmt::Display for ThetaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Observed count per species, in order of first appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpeciesCounts {
    counts: IndexMap<String, u64>,
}

impl SpeciesCounts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds counts from `(species, count)` pairs. Repeated species are summed
    /// and keep the position of their first occurrence.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, HistogramError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut out = Self::new();
        for (species, count) in pairs {
            let species = species.into();
            if count == 0 {
                return Err(HistogramError::ZeroCount(species));
            }
            *out.counts.entry(species).or_insert(0) += count;
        }
        Ok(out)
    }

    /// Records one more occurrence of `species`.
    pub fn observe(&mut self, species: &str) {
        match self.counts.get_mut(species) {
            Some(c) => *c += 1,
            None => {
                self.counts.insert(species.to_owned(), 1);
            }
        }
    }

    pub fn get(&self, species: &str) -> Option<u64> {
        self.counts.get(species).copied()
    }

    /// Zero-based first-appearance index.
    pub fn appearance_index(&self, species: &str) -> Option<usize> {
        self.counts.get_index_of(species)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of tokens, `N = Σ counts`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.counts.iter().map(|(s, &c)| (s.as_str(), c))
    }

    pub fn species(&self) -> impl Iterator<Item = &str> + '_ {
        self.counts.keys().map(String::as_str)
    }

    /// Drops species seen fewer than `min_count` times, preserving order.
    pub fn retain_min_count(&mut self, min_count: u64) {
        self.counts.retain(|_, c| *c >= min_count);
    }
}

/// Frequency-of-frequencies table `x ↦ N_x`.
///
/// Zero cells are not stored, so `max_frequency` is always the largest `x`
/// with `N_x > 0`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrequencyHistogram {
    cells: BTreeMap<u64, f64>,
}

impl FrequencyHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells<I>(cells: I) -> Result<Self, HistogramError>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut out = BTreeMap::new();
        for (x, n) in cells {
            if x == 0 {
                return Err(HistogramError::ZeroFrequency(x));
            }
            if !n.is_finite() || n < 0.0 {
                return Err(HistogramError::InvalidCell { x, value: n });
            }
            if n > 0.0 {
                *out.entry(x).or_insert(0.0) += n;
            }
        }
        Ok(Self { cells: out })
    }

    /// `N_x`, zero when absent.
    pub fn get(&self, x: u64) -> f64 {
        self.cells.get(&x).copied().unwrap_or(0.0)
    }

    /// Largest frequency count with a non-zero cell (`X`), or `None` when empty.
    pub fn max_frequency(&self) -> Option<u64> {
        self.cells.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Non-zero cells in ascending `x`.
    pub fn cells(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.cells.iter().map(|(&x, &n)| (x, n))
    }

    /// Number of species, `Σ N_x`.
    pub fn species_count(&self) -> f64 {
        self.cells.values().sum()
    }

    /// Token mass `N = Σ x · N_x`.
    pub fn total_population(&self) -> f64 {
        self.cells.iter().map(|(&x, &n)| x as f64 * n).sum()
    }

    /// Rank of the last species with count `x`: `r(x) = Σ_{k ≥ x} N_k`.
    ///
    /// Summed from the top down, so `rank_of(x) - rank_of(x+1)` recovers `N_x`
    /// exactly for integral histograms.
    pub fn rank_of(&self, x: u64) -> f64 {
        self.cells.range(x.max(1)..).rev().map(|(_, &n)| n).sum()
    }

    /// Reestimated count `x* = (x + θ) · N_{x+1} / N_x`.
    ///
    /// An absent `N_{x+1}` reads as zero; an absent `N_x` is an error since the
    /// formula divides by it.
    pub fn reestimate(&self, x: u64, theta: ThetaParam) -> Result<f64, HistogramError> {
        let n_x = self.get(x);
        if x == 0 || n_x <= 0.0 {
            return Err(HistogramError::UndefinedReestimate(x));
        }
        Ok((x as f64 + theta.value()) * self.get(x + 1) / n_x)
    }

    /// The ideal population for `θ`: `N_1 = n1`, `N_{x+1} = N_x · x/(x+θ)` up
    /// to `x = max_x`.
    pub fn ideal(theta: ThetaParam, n1: f64, max_x: u64) -> Result<Self, HistogramError> {
        let t = theta.value();
        if t <= 0.0 {
            return Err(HistogramError::NonPositiveTheta(t));
        }
        if !(n1.is_finite() && n1 > 0.0) {
            return Err(HistogramError::InvalidSeed(n1));
        }
        if max_x == 0 {
            return Err(HistogramError::EmptyRange);
        }
        let mut cells = BTreeMap::new();
        let mut n = n1;
        cells.insert(1, n);
        for x in 1..max_x {
            let xf = x as f64;
            n = n * xf / (xf + t);
            if n > 0.0 {
                cells.insert(x + 1, n);
            }
        }
        Ok(Self { cells })
    }
}

impl From<&SpeciesCounts> for FrequencyHistogram {
    fn from(counts: &SpeciesCounts) -> Self {
        build_histogram(counts)
    }
}

/// `N_x = |{s : counts[s] = x}|`.
pub fn build_histogram(counts: &SpeciesCounts) -> FrequencyHistogram {
    let mut cells = BTreeMap::new();
    for (_, c) in counts.iter() {
        *cells.entry(c).or_insert(0.0) += 1.0;
    }
    FrequencyHistogram { cells }
}
