//! Closed-form rank-frequency asymptotes.
//!
//! Every member of the reestimation family has a limiting law for the relative
//! frequency `f(r)` of the species at rank `r`:
//!
//! ```text
//! θ = 1:  f(r) = C · e^(-λ r)          (Turing; with λ = 1/N_1 normalised to
//!                                       f(r) = 1/N_1 · e^(-(r-1)/N_1))
//! θ ≠ 1:  f(r) = C · r^(-1/(θ-1))      (power law, β = 1/(θ-1))
//! θ = 2:  f(r) = A / (B + r)           (Zipf, Mandelbrot-shifted by B)
//! ```
//!
//! Constants are kept unnormalised. [`AsymptoteSpec::normalize`] rescales a
//! law so that `∫_1^∞ f = 1`, which only exists on the convergence region
//! `θ ∈ [1, 2)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoteError {
    #[error("rank must be >= 1, got {0}")]
    RankBelowOne(f64),
    #[error("invalid asymptote parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("theta = 1 has no power-law form; use the exponential parameterisation")]
    PowerAtTuring,
    #[error("theta = {0} must be > 1 to convert to a power-law exponent")]
    ThetaNotAboveOne(f64),
    #[error("beta = {0} must be > 0")]
    NonPositiveBeta(f64),
    #[error("geometric p must lie in (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("cumulative diverges for theta = {0}; no normalised law exists")]
    Divergent(f64),
}

/// One member of the asymptote family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum AsymptoteSpec {
    /// `f(r) = 1/n1 · e^(-(r-1)/n1)`, already normalised.
    Turing { n1: f64 },
    /// `f(r) = scale · e^(-rate · r)`.
    Exponential { scale: f64, rate: f64 },
    /// `f(r) = scale · r^(-1/(θ-1))`, `θ ≠ 1`.
    Power { theta: f64, scale: f64 },
    /// `f(r) = a / (b + r)`, `b > -1`.
    Zipf { a: f64, b: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, AsymptoteError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AsymptoteError::InvalidParameter { name, value })
    }
}

impl AsymptoteSpec {
    pub fn turing(n1: f64) -> Result<Self, AsymptoteError> {
        Ok(Self::Turing {
            n1: positive("n1", n1)?,
        })
    }

    pub fn exponential(scale: f64, rate: f64) -> Result<Self, AsymptoteError> {
        Ok(Self::Exponential {
            scale: positive("scale", scale)?,
            rate: positive("rate", rate)?,
        })
    }

    pub fn power(theta: f64, scale: f64) -> Result<Self, AsymptoteError> {
        if !theta.is_finite() {
            return Err(AsymptoteError::InvalidParameter {
                name: "theta",
                value: theta,
            });
        }
        if theta == 1.0 {
            return Err(AsymptoteError::PowerAtTuring);
        }
        Ok(Self::Power {
            theta,
            scale: positive("scale", scale)?,
        })
    }

    pub fn zipf(a: f64, b: f64) -> Result<Self, AsymptoteError> {
        if !(b.is_finite() && b > -1.0) {
            return Err(AsymptoteError::InvalidParameter {
                name: "b",
                value: b,
            });
        }
        Ok(Self::Zipf {
            a: positive("a", a)?,
            b,
        })
    }

    /// The exponential law whose integer ranks carry `P(r) = p (1-p)^(r-1)`.
    pub fn geometric(p: f64) -> Result<Self, AsymptoteError> {
        check_probability(p)?;
        Self::exponential(p / (1.0 - p), -(-p).ln_1p())
    }

    /// A law with the given θ: exponential with rate `1/n1` at θ = 1, otherwise
    /// a power law with unit scale.
    pub fn for_theta(theta: f64, n1: f64) -> Result<Self, AsymptoteError> {
        if theta == 1.0 {
            Self::turing(n1)
        } else {
            Self::power(theta, 1.0)
        }
    }

    pub fn theta(&self) -> f64 {
        match *self {
            Self::Turing { .. } | Self::Exponential { .. } => 1.0,
            Self::Power { theta, .. } => theta,
            Self::Zipf { .. } => 2.0,
        }
    }

    /// `f(r)` for `r >= 1`.
    pub fn frequency_at(&self, r: f64) -> Result<f64, AsymptoteError> {
        if !(r >= 1.0) {
            return Err(AsymptoteError::RankBelowOne(r));
        }
        Ok(self.eval(r))
    }

    fn eval(&self, r: f64) -> f64 {
        match *self {
            Self::Turing { n1 } => (-(r - 1.0) / n1).exp() / n1,
            Self::Exponential { scale, rate } => scale * (-rate * r).exp(),
            Self::Power { theta, scale } => scale * r.powf(-1.0 / (theta - 1.0)),
            Self::Zipf { a, b } => a / (b + r),
        }
    }

    /// Continuous cumulative `F(r) = ∫_1^r f(ρ) dρ`, in closed form.
    pub fn cumulative(&self, r: f64) -> Result<f64, AsymptoteError> {
        if !(r >= 1.0) {
            return Err(AsymptoteError::RankBelowOne(r));
        }
        Ok(match *self {
            Self::Turing { n1 } => -(-(r - 1.0) / n1).exp_m1(),
            Self::Exponential { scale, rate } => {
                scale / rate * (-rate).exp() * -(-rate * (r - 1.0)).exp_m1()
            }
            Self::Power { theta, scale } => {
                let beta = 1.0 / (theta - 1.0);
                if beta == 1.0 {
                    scale * r.ln()
                } else {
                    let k = 1.0 - beta;
                    scale * (k * r.ln()).exp_m1() / k
                }
            }
            Self::Zipf { a, b } => a * ((r - 1.0) / (b + 1.0)).ln_1p(),
        })
    }

    /// Discrete cumulative `Σ_{k=1}^{r_max} f(k)`.
    pub fn discrete_cumulative(&self, r_max: u64) -> f64 {
        // summed smallest-first to limit rounding on long tails
        (1..=r_max).rev().map(|k| self.eval(k as f64)).sum()
    }

    /// `lim_{r→∞} F(r)`, or `None` when the cumulative diverges.
    pub fn total_mass(&self) -> Option<f64> {
        match *self {
            Self::Turing { .. } => Some(1.0),
            Self::Exponential { scale, rate } => Some(scale / rate * (-rate).exp()),
            Self::Power { theta, scale } => {
                let beta = 1.0 / (theta - 1.0);
                (beta > 1.0).then(|| scale / (beta - 1.0))
            }
            Self::Zipf { .. } => None,
        }
    }

    /// Rescales the law so that `∫_1^∞ f = 1`.
    ///
    /// Fails outside the convergence region. The exponential case with
    /// `rate = 1/n1` yields `scale = e^(1/n1)/n1`, i.e. the Turing law.
    pub fn normalize(&self) -> Result<Self, AsymptoteError> {
        let mass = self
            .total_mass()
            .ok_or(AsymptoteError::Divergent(self.theta()))?;
        Ok(match *self {
            Self::Turing { n1 } => Self::Turing { n1 },
            Self::Exponential { scale, rate } => Self::Exponential {
                scale: scale / mass,
                rate,
            },
            Self::Power { theta, scale } => Self::Power {
                theta,
                scale: scale / mass,
            },
            Self::Zipf { .. } => unreachable!("zipf has no finite mass"),
        })
    }
}

/// `β = 1/(θ - 1)`, the power-law exponent paired with `θ > 1`.
pub fn beta_of_theta(theta: f64) -> Result<f64, AsymptoteError> {
    if theta.is_finite() && theta > 1.0 {
        Ok(1.0 / (theta - 1.0))
    } else {
        Err(AsymptoteError::ThetaNotAboveOne(theta))
    }
}

/// `θ = 1 + 1/β`.
pub fn theta_of_beta(beta: f64) -> Result<f64, AsymptoteError> {
    if beta.is_finite() && beta > 0.0 {
        Ok(1.0 + 1.0 / beta)
    } else {
        Err(AsymptoteError::NonPositiveBeta(beta))
    }
}

fn check_probability(p: f64) -> Result<f64, AsymptoteError> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(AsymptoteError::InvalidProbability(p))
    }
}

/// `P(r) = p · (1 - p)^(r - 1)`.
pub fn geometric_pmf(p: f64, r: u64) -> Result<f64, AsymptoteError> {
    check_probability(p)?;
    if r == 0 {
        return Err(AsymptoteError::RankBelowOne(0.0));
    }
    Ok(p * ((r - 1) as f64 * (-p).ln_1p()).exp())
}

/// `P(R > r) = (1 - p)^r`, the geometric mass beyond rank `r`.
pub fn geometric_tail(p: f64, r: u64) -> Result<f64, AsymptoteError> {
    check_probability(p)?;
    Ok((r as f64 * (-p).ln_1p()).exp())
}

/// Whether `∫_1^∞ f(r) dr` is finite for the law paired with `θ`: true exactly
/// on `[1, 2)`.
pub fn converges(theta: f64) -> bool {
    (1.0..2.0).contains(&theta)
}
