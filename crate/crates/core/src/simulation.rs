//! Seeded sampling from finite populations that follow an asymptotic law.
//!
//! A [`PopulationModel`] truncates an [`AsymptoteSpec`] to ranks `1..=S` and
//! renormalises, so that laws without a finite total mass (θ ≥ 2) can be
//! sampled as well. Draws use an alias table over a ChaCha8 stream seeded from
//! the model's seed; the same model always yields the same tokens.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptote::AsymptoteSpec;
use crate::histogram::{build_histogram, FrequencyHistogram, SpeciesCounts, ThetaParam};

/// Cells with fewer species than this are too noisy to report.
pub const MIN_REPORT_CELL: f64 = 30.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("population needs at least one species")]
    NoSpecies,
    #[error("law produced an unusable weight {weight} at rank {rank}")]
    InvalidWeight { rank: usize, weight: f64 },
    #[error("alias table construction failed: {0}")]
    Alias(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationModel {
    spec: AsymptoteSpec,
    probabilities: Vec<f64>,
    seed: u64,
}

/// Species identifier for a 1-based population rank.
pub fn species_name(rank: usize) -> String {
    format!("s{rank}")
}

impl PopulationModel {
    pub fn new(spec: AsymptoteSpec, species: usize, seed: u64) -> Result<Self, SimulationError> {
        if species == 0 {
            return Err(SimulationError::NoSpecies);
        }
        let mut weights = Vec::with_capacity(species);
        for rank in 1..=species {
            let w = spec
                .frequency_at(rank as f64)
                .map_err(|_| SimulationError::InvalidWeight {
                    rank,
                    weight: f64::NAN,
                })?;
            if !(w.is_finite() && w > 0.0) {
                return Err(SimulationError::InvalidWeight { rank, weight: w });
            }
            weights.push(w);
        }
        let total: f64 = weights.iter().rev().sum();
        let probabilities = weights.into_iter().map(|w| w / total).collect();
        Ok(Self {
            spec,
            probabilities,
            seed,
        })
    }

    pub fn spec(&self) -> &AsymptoteSpec {
        &self.spec
    }

    pub fn species(&self) -> usize {
        self.probabilities.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    /// Truncated, renormalised probability of each rank (index 0 is rank 1).
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `n_tokens` i.i.d. draws as 0-based rank indices.
    pub fn draws(&self, n_tokens: u64) -> Result<impl Iterator<Item = usize>, SimulationError> {
        let table = WeightedAliasIndex::new(self.probabilities.clone())
            .map_err(|e| SimulationError::Alias(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..n_tokens).map(move |_| table.sample(&mut rng)))
    }

    /// Counts of a sample of `n_tokens`, species in order of first draw.
    pub fn sample_tokens(&self, n_tokens: u64) -> Result<SpeciesCounts, SimulationError> {
        let mut counts = vec![0u64; self.species()];
        let mut order = Vec::new();
        for i in self.draws(n_tokens)? {
            if counts[i] == 0 {
                order.push(i);
            }
            counts[i] += 1;
        }
        Ok(
            SpeciesCounts::from_pairs(order.into_iter().map(|i| (species_name(i + 1), counts[i])))
                .expect("sampled counts are positive"),
        )
    }

    /// Samples, builds the histogram and reestimates each `x` up to the
    /// largest count with at least [`MIN_REPORT_CELL`] species.
    pub fn empirical_reestimation_report(
        &self,
        n_tokens: u64,
        theta: ThetaParam,
    ) -> Result<ReestimationReport, SimulationError> {
        let hist = build_histogram(&self.sample_tokens(n_tokens)?);
        let cutoff = hist
            .cells()
            .filter(|&(_, n)| n >= MIN_REPORT_CELL)
            .map(|(x, _)| x)
            .max()
            .unwrap_or(0);
        Ok(ReestimationReport {
            theta: theta.value(),
            seed: self.seed,
            n_tokens,
            cutoff,
            rows: reestimation_rows(&hist, theta, cutoff),
        })
    }

    /// Mean reestimates over several seeds for `x = 1..=x_max`.
    pub fn reestimation_over_seeds(
        &self,
        n_tokens: u64,
        theta: ThetaParam,
        seeds: &[u64],
        x_max: u64,
    ) -> Result<Vec<SeedSummaryRow>, SimulationError> {
        let mut per_seed = Vec::with_capacity(seeds.len());
        for &seed in seeds {
            let hist = build_histogram(&self.with_seed(seed).sample_tokens(n_tokens)?);
            per_seed.push(reestimation_rows(&hist, theta, x_max));
        }
        Ok((0..x_max as usize)
            .map(|i| {
                let x = i as u64 + 1;
                let defined: Vec<f64> = per_seed.iter().filter_map(|rows| rows[i].x_star).collect();
                let n = defined.len() as f64;
                let mean_x_star = defined.iter().sum::<f64>() / n;
                let mean_relative_error = defined
                    .iter()
                    .map(|v| (v - x as f64).abs() / x as f64)
                    .sum::<f64>()
                    / n;
                SeedSummaryRow {
                    x,
                    seeds: seeds.len(),
                    defined: defined.len(),
                    mean_x_star: (n > 0.0).then_some(mean_x_star),
                    mean_relative_error: (n > 0.0).then_some(mean_relative_error),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReestimationRow {
    pub x: u64,
    pub n_x: f64,
    /// `None` where `N_x = 0`.
    pub x_star: Option<f64>,
    pub relative_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReestimationReport {
    pub theta: f64,
    pub seed: u64,
    pub n_tokens: u64,
    pub cutoff: u64,
    pub rows: Vec<ReestimationRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummaryRow {
    pub x: u64,
    pub seeds: usize,
    /// Seeds on which `x*` was defined.
    pub defined: usize,
    pub mean_x_star: Option<f64>,
    /// Mean over seeds of `|x* - x| / x`.
    pub mean_relative_error: Option<f64>,
}

/// `x*` and `|x* - x|/x` for `x = 1..=x_max`; empty cells become gaps.
pub fn reestimation_rows(
    hist: &FrequencyHistogram,
    theta: ThetaParam,
    x_max: u64,
) -> Vec<ReestimationRow> {
    (1..=x_max)
        .map(|x| {
            let x_star = hist.reestimate(x, theta).ok();
            ReestimationRow {
                x,
                n_x: hist.get(x),
                x_star,
                relative_error: x_star.map(|v| (v - x as f64).abs() / x as f64),
            }
        })
        .collect()
}
