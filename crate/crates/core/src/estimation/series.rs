use serde::{Deserialize, Serialize};

use super::ranking::{build_ranking, RankingCriteria};
use super::EstimationError;
use crate::histogram::SpeciesCounts;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankPoint {
    pub rank: u64,
    pub frequency: f64,
}

/// Relative frequency by rank, most common species first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankFrequencySeries {
    points: Vec<RankPoint>,
}

impl RankFrequencySeries {
    /// Builds a series from frequencies listed for ranks `1, 2, ...`.
    ///
    /// Frequencies must be positive, non-increasing and sum to at most one.
    pub fn from_frequencies(freqs: Vec<f64>) -> Result<Self, EstimationError> {
        let mut prev = f64::INFINITY;
        let mut sum = 0.0;
        for (i, &f) in freqs.iter().enumerate() {
            if !(f.is_finite() && f > 0.0) {
                return Err(EstimationError::InvalidSeries(format!(
                    "frequency at rank {} is {f}",
                    i + 1
                )));
            }
            if f > prev {
                return Err(EstimationError::InvalidSeries(format!(
                    "frequency increases at rank {}",
                    i + 1
                )));
            }
            prev = f;
            sum += f;
        }
        if sum > 1.0 + 1e-9 {
            return Err(EstimationError::InvalidSeries(format!(
                "frequencies sum to {sum} > 1"
            )));
        }
        let points = freqs
            .into_iter()
            .enumerate()
            .map(|(i, frequency)| RankPoint {
                rank: i as u64 + 1,
                frequency,
            })
            .collect();
        Ok(Self { points })
    }

    pub fn points(&self) -> &[RankPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Frequency at `rank`, if the series reaches it.
    pub fn frequency(&self, rank: u64) -> Option<f64> {
        rank.checked_sub(1)
            .and_then(|i| self.points.get(i as usize))
            .map(|p| p.frequency)
    }
}

/// Orders species by [`build_ranking`] with default tie-breaks and divides
/// each count by `N`.
pub fn rank_series_from_counts(
    counts: &SpeciesCounts,
) -> Result<RankFrequencySeries, EstimationError> {
    if counts.is_empty() {
        return Err(EstimationError::EmptyCounts);
    }
    let total = counts.total() as f64;
    let freqs = build_ranking(counts, &RankingCriteria::default())
        .iter()
        .map(|s| counts.get(s).unwrap_or(0) as f64 / total)
        .collect();
    RankFrequencySeries::from_frequencies(freqs)
}
