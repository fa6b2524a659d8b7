use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::EstimationError;
use crate::asymptote::{geometric_pmf, geometric_tail};
use crate::histogram::{build_histogram, FrequencyHistogram, SpeciesCounts, ThetaParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingMethod {
    GoodTuring,
    GeometricTail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesProbability {
    pub species: String,
    pub count: u64,
    pub probability: f64,
}

/// Smoothed probabilities for seen species plus the mass reserved for unseen
/// ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothedDistribution {
    pub method: SmoothingMethod,
    pub unseen_mass: f64,
    pub species: Vec<SpeciesProbability>,
}

impl SmoothedDistribution {
    pub fn probability(&self, species: &str) -> Option<f64> {
        self.species
            .iter()
            .find(|s| s.species == species)
            .map(|s| s.probability)
    }

    /// `unseen_mass + Σ p`, one up to rounding.
    pub fn total(&self) -> f64 {
        self.unseen_mass + self.species.iter().map(|s| s.probability).sum::<f64>()
    }
}

/// `N_x` on every `x` from the smallest observed count up to `X`, with empty
/// cells filled by linear interpolation of `ln N_x` against `ln x` between the
/// neighbouring observed cells.
pub fn fill_gaps(hist: &FrequencyHistogram) -> BTreeMap<u64, f64> {
    let cells: Vec<(u64, f64)> = hist.cells().collect();
    let mut out = BTreeMap::new();
    for pair in cells.windows(2) {
        let (x0, n0) = pair[0];
        let (x1, n1) = pair[1];
        out.insert(x0, n0);
        let (lx0, lx1) = ((x0 as f64).ln(), (x1 as f64).ln());
        let (ln0, ln1) = (n0.ln(), n1.ln());
        for x in x0 + 1..x1 {
            let t = ((x as f64).ln() - lx0) / (lx1 - lx0);
            out.insert(x, (ln0 + t * (ln1 - ln0)).exp());
        }
    }
    if let Some(&(x, n)) = cells.last() {
        out.insert(x, n);
    }
    out
}

/// `(x, x*)` for every `x` from the smallest observed count to `X`.
///
/// Gaps are filled by [`fill_gaps`] before applying
/// `x* = (x + θ) N_{x+1} / N_x`; the largest count `X` is kept as is.
pub fn reestimate_table(hist: &FrequencyHistogram, theta: ThetaParam) -> Vec<(u64, f64)> {
    let filled = fill_gaps(hist);
    let Some(max_x) = hist.max_frequency() else {
        return Vec::new();
    };
    filled
        .iter()
        .map(|(&x, &n_x)| {
            if x == max_x {
                (x, x as f64)
            } else {
                let next = filled.get(&(x + 1)).copied().unwrap_or(0.0);
                (x, (x as f64 + theta.value()) * next / n_x)
            }
        })
        .collect()
}

/// Good-Turing probabilities.
///
/// Each species seen `x` times gets weight `x*/N` from the Turing formula on a
/// gap-filled histogram. The unseen mass is `N_1/N` and the seen weights are
/// rescaled to `1 - N_1/N`.
pub fn good_turing_smooth(counts: &SpeciesCounts) -> Result<SmoothedDistribution, EstimationError> {
    if counts.is_empty() {
        return Err(EstimationError::EmptyCounts);
    }
    let hist = build_histogram(counts);
    let n = hist.total_population();
    let n1 = hist.get(1);
    if n1 == 0.0 {
        return Err(EstimationError::NoSingletons);
    }
    if n1 == n {
        return Err(EstimationError::AllSingletons);
    }
    let unseen_mass = n1 / n;
    let adjusted: BTreeMap<u64, f64> = reestimate_table(&hist, ThetaParam::TURING)
        .into_iter()
        .collect();

    let weights: Vec<f64> = counts.iter().map(|(_, c)| adjusted[&c] / n).collect();
    let seen_total: f64 = weights.iter().sum();
    let scale = (1.0 - unseen_mass) / seen_total;
    let species = counts
        .iter()
        .zip(weights)
        .map(|((s, count), w)| SpeciesProbability {
            species: s.to_owned(),
            count,
            probability: w * scale,
        })
        .collect();
    Ok(SmoothedDistribution {
        method: SmoothingMethod::GoodTuring,
        unseen_mass,
        species,
    })
}

/// `p = 1/N_1`, the rate of the Turing asymptote.
pub fn default_geometric_p(counts: &SpeciesCounts) -> Result<f64, EstimationError> {
    let n1 = counts.iter().filter(|&(_, c)| c == 1).count() as u64;
    if n1 < 2 {
        return Err(EstimationError::NoDefaultP(n1));
    }
    Ok(1.0 / n1 as f64)
}

/// Keeps relative frequencies for the top `head_size` species of `ranking`
/// and spreads the remaining empirical mass geometrically over the rest.
///
/// The species at tail position `j` (1-based) receives `M · p (1-p)^(j-1)`,
/// where `M` is the tail's empirical mass; the geometric remainder beyond the
/// last seen rank, `M · (1-p)^T`, becomes the unseen mass.
pub fn geometric_tail_smooth(
    counts: &SpeciesCounts,
    ranking: &[String],
    p: f64,
    head_size: usize,
) -> Result<SmoothedDistribution, EstimationError> {
    geometric_pmf(p, 1)?;
    if counts.is_empty() {
        return Err(EstimationError::EmptyCounts);
    }
    check_ranking(counts, ranking)?;
    if head_size > ranking.len() {
        return Err(EstimationError::HeadTooLarge {
            head: head_size,
            species: ranking.len(),
        });
    }

    let n = counts.total() as f64;
    let count_of = |s: &str| counts.get(s).unwrap_or(0);
    let tail = &ranking[head_size..];
    let tail_mass: f64 = tail.iter().map(|s| count_of(s) as f64).sum::<f64>() / n;

    let mut species = Vec::with_capacity(ranking.len());
    for s in &ranking[..head_size] {
        let c = count_of(s);
        species.push(SpeciesProbability {
            species: s.clone(),
            count: c,
            probability: c as f64 / n,
        });
    }
    for (j, s) in tail.iter().enumerate() {
        species.push(SpeciesProbability {
            species: s.clone(),
            count: count_of(s),
            probability: tail_mass * geometric_pmf(p, j as u64 + 1)?,
        });
    }
    let unseen_mass = if tail.is_empty() {
        0.0
    } else {
        tail_mass * geometric_tail(p, tail.len() as u64)?
    };
    Ok(SmoothedDistribution {
        method: SmoothingMethod::GeometricTail,
        unseen_mass,
        species,
    })
}

fn check_ranking(counts: &SpeciesCounts, ranking: &[String]) -> Result<(), EstimationError> {
    let mut seen = HashSet::with_capacity(ranking.len());
    for s in ranking {
        if counts.get(s).is_none() {
            return Err(EstimationError::RankingMismatch(format!(
                "'{s}' is not a counted species"
            )));
        }
        if !seen.insert(s.as_str()) {
            return Err(EstimationError::RankingMismatch(format!(
                "'{s}' ranked twice"
            )));
        }
    }
    if seen.len() != counts.len() {
        return Err(EstimationError::RankingMismatch(format!(
            "ranking covers {} of {} species",
            seen.len(),
            counts.len()
        )));
    }
    Ok(())
}
