use serde::{Deserialize, Serialize};

use super::series::RankFrequencySeries;
use super::EstimationError;
use crate::asymptote::{theta_of_beta, AsymptoteSpec};

/// Smallest tail accepted by [`fit_theta`].
pub const MIN_TAIL_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `log f` linear in `r`; θ = 1.
    Exponential,
    /// `log f` linear in `log r`; θ = 1 + 1/β.
    Power,
}

/// Result of fitting the asymptote family to a rank-frequency tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaFit {
    pub model: FitModel,
    pub theta_hat: f64,
    /// Power-law exponent; `None` for the exponential model (β = ∞).
    pub beta_hat: Option<f64>,
    /// Exponential rate; `None` for the power model.
    pub lambda_hat: Option<f64>,
    /// Fitted intercept of the chosen linearisation, i.e. `ln C`.
    pub log_scale: f64,
    /// R² of the chosen model.
    pub goodness: f64,
    /// R² of the rejected model.
    pub rival_goodness: f64,
    pub tail_start: u64,
    pub tail_points: usize,
}

impl ThetaFit {
    /// The fitted law as an (unnormalised) asymptote.
    pub fn asymptote(&self) -> Result<AsymptoteSpec, EstimationError> {
        let scale = self.log_scale.exp();
        Ok(match self.model {
            FitModel::Exponential => {
                AsymptoteSpec::exponential(scale, self.lambda_hat.unwrap_or_default())?
            }
            FitModel::Power => AsymptoteSpec::power(self.theta_hat, scale)?,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct LineFit {
    slope: f64,
    intercept: f64,
    r2: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        r2: (1.0 - sse / syy).clamp(0.0, 1.0),
    })
}

/// First rank whose frequency drops below a tenth of the top frequency.
pub fn default_tail_start(series: &RankFrequencySeries) -> Option<u64> {
    let top = series.frequency(1)?;
    series
        .points()
        .iter()
        .find(|p| p.frequency < top / 10.0)
        .map(|p| p.rank)
}

/// Fits the tail `r >= tail_start` with both a power law and an exponential
/// and keeps whichever linearisation has the higher R².
///
/// `tail_start = None` uses [`default_tail_start`].
pub fn fit_theta(
    series: &RankFrequencySeries,
    tail_start: Option<u64>,
) -> Result<ThetaFit, EstimationError> {
    let start = tail_start
        .or_else(|| default_tail_start(series))
        .unwrap_or(u64::MAX);
    let tail: Vec<_> = series.points().iter().filter(|p| p.rank >= start).collect();
    if tail.len() < MIN_TAIL_POINTS {
        return Err(EstimationError::TooFewTailPoints {
            needed: MIN_TAIL_POINTS,
            got: tail.len(),
            tail_start: start,
        });
    }

    let ranks: Vec<f64> = tail.iter().map(|p| p.rank as f64).collect();
    let log_ranks: Vec<f64> = ranks.iter().map(|r| r.ln()).collect();
    let log_freqs: Vec<f64> = tail.iter().map(|p| p.frequency.ln()).collect();

    let power = least_squares(&log_ranks, &log_freqs).ok_or(EstimationError::DegenerateTail)?;
    let expo = least_squares(&ranks, &log_freqs).ok_or(EstimationError::DegenerateTail)?;

    if power.r2 > expo.r2 {
        let beta = -power.slope;
        if !(beta > 0.0) {
            return Err(EstimationError::NonPositiveBeta(beta));
        }
        Ok(ThetaFit {
            model: FitModel::Power,
            theta_hat: theta_of_beta(beta)?,
            beta_hat: Some(beta),
            lambda_hat: None,
            log_scale: power.intercept,
            goodness: power.r2,
            rival_goodness: expo.r2,
            tail_start: start,
            tail_points: tail.len(),
        })
    } else {
        let lambda = -expo.slope;
        if !(lambda > 0.0) {
            return Err(EstimationError::NonPositiveRate(lambda));
        }
        Ok(ThetaFit {
            model: FitModel::Exponential,
            theta_hat: 1.0,
            beta_hat: None,
            lambda_hat: Some(lambda),
            log_scale: expo.intercept,
            goodness: expo.r2,
            rival_goodness: power.r2,
            tail_start: start,
            tail_points: tail.len(),
        })
    }
}
