//! Numeric sweeps of the analytic claims relating recurrences and asymptotes.
//!
//! The error bounds are checked by evaluating both sides at every integer
//! point of a range. Comparisons are exact `<=` on the computed doubles unless
//! an epsilon is supplied; the margin `bound - residual` is always recorded so
//! near misses stay visible.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack offered for bound checks whose bound is exactly zero.
pub const DEFAULT_EPSILON: f64 = 1e-15;

pub const BOUND_REPORT_SCHEMA: &str = "freqlaw.bound_report.v1";

#[derive(Debug, Error)]
pub enum VerificationError {
    #[error("invalid range: need {min_allowed} <= x_min ({x_min}) <= x_max ({x_max})")]
    InvalidRange {
        x_min: u64,
        x_max: u64,
        min_allowed: u64,
    },
    #[error("theta = 1 is the Turing case; use the Turing bound check")]
    ThetaIsOne,
    #[error("theta must be finite and > 0, got {0}")]
    InvalidTheta(f64),
    #[error("epsilon must be finite and >= 0, got {0}")]
    InvalidEpsilon(f64),
    #[error("values must be positive and ascending")]
    NotAscending,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub x: u64,
    pub residual: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema: String,
    pub check: String,
    pub theta: f64,
    /// Slack added to the bound, when enabled.
    pub epsilon: Option<f64>,
    pub all_pass: bool,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    fn from_rows(check: &str, theta: f64, epsilon: Option<f64>, rows: Vec<BoundRow>) -> Self {
        Self {
            schema: BOUND_REPORT_SCHEMA.to_owned(),
            check: check.to_owned(),
            theta,
            epsilon,
            all_pass: rows.iter().all(|r| r.pass),
            rows,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Rows that pass only because of the epsilon.
    pub fn rescued_by_epsilon(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.pass && r.residual > r.bound)
            .count()
    }

    /// CSV with a leading `# schema` comment and columns
    /// `x,residual,bound,margin,pass`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), VerificationError> {
        writeln!(
            out,
            "# schema: {} check={} theta={} epsilon={}",
            self.schema,
            self.check,
            self.theta,
            self.epsilon.map_or("none".to_owned(), |e| e.to_string())
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "residual", "bound", "margin", "pass"])?;
        for r in &self.rows {
            w.write_record([
                r.x.to_string(),
                r.residual.to_string(),
                r.bound.to_string(),
                r.margin.to_string(),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), VerificationError> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }
}

fn check_epsilon(epsilon: Option<f64>) -> Result<f64, VerificationError> {
    match epsilon {
        None => Ok(0.0),
        Some(e) if e.is_finite() && e >= 0.0 => Ok(e),
        Some(e) => Err(VerificationError::InvalidEpsilon(e)),
    }
}

fn row(x: u64, residual: f64, bound: f64, slack: f64) -> BoundRow {
    BoundRow {
        x,
        residual,
        bound,
        margin: bound - residual,
        pass: residual <= bound + slack,
    }
}

/// Checks `|N_{x+1}/N_x - x/(x+1)| <= 1/x²` for `N_x = ln(1 + 1/x)`, the
/// histogram implied by the Turing asymptote.
pub fn turing_bound_check(
    x_min: u64,
    x_max: u64,
    epsilon: Option<f64>,
) -> Result<BoundReport, VerificationError> {
    if x_min < 2 || x_min > x_max {
        return Err(VerificationError::InvalidRange {
            x_min,
            x_max,
            min_allowed: 2,
        });
    }
    let slack = check_epsilon(epsilon)?;
    let cell = |x: u64| (1.0 / x as f64).ln_1p();
    let rows = (x_min..=x_max)
        .map(|x| {
            let xf = x as f64;
            let residual = (cell(x + 1) / cell(x) - xf / (xf + 1.0)).abs();
            row(x, residual, 1.0 / (xf * xf), slack)
        })
        .collect();
    Ok(BoundReport::from_rows("turing-bound", 1.0, epsilon, rows))
}

/// `N_x = r(x) - r(x+1)` for `r(x) = x^(-α)`, computed without cancellation
/// as `-x^(-α) · expm1(-α ln(1 + 1/x))`.
fn power_rank_cell(x: f64, alpha: f64) -> f64 {
    -x.powf(-alpha) * (-alpha * (1.0 / x).ln_1p()).exp_m1()
}

/// Checks `|x/(x+α+1) - N_{x+1}/N_x| <= |α² - 1|/x²` with `α = θ - 1` and the
/// histogram implied by the rank function `r(x) = x^(-α)`.
pub fn general_bound_check(
    theta: f64,
    x_min: u64,
    x_max: u64,
    epsilon: Option<f64>,
) -> Result<BoundReport, VerificationError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(VerificationError::InvalidTheta(theta));
    }
    if theta == 1.0 {
        return Err(VerificationError::ThetaIsOne);
    }
    if x_min < 2 || x_min > x_max {
        return Err(VerificationError::InvalidRange {
            x_min,
            x_max,
            min_allowed: 2,
        });
    }
    let slack = check_epsilon(epsilon)?;
    let alpha = theta - 1.0;
    let bound_coeff = (alpha * alpha - 1.0).abs();
    let rows = (x_min..=x_max)
        .map(|x| {
            let xf = x as f64;
            let ratio = power_rank_cell(xf + 1.0, alpha) / power_rank_cell(xf, alpha);
            let residual = (xf / (xf + alpha + 1.0) - ratio).abs();
            row(x, residual, bound_coeff / (xf * xf), slack)
        })
        .collect();
    Ok(BoundReport::from_rows(
        "general-bound",
        theta,
        epsilon,
        rows,
    ))
}

/// `(x, (x+1)^θ · Π_{k=1}^{x} k/(k+θ))` for each requested `x`.
///
/// The logarithm is accumulated as `Σ_k [θ ln(1 + 1/k) - ln(1 + θ/k)]`, using
/// `ln(x+1) = Σ_k ln(1 + 1/k)`. Terms are `O(1/k²)`, so the sum neither
/// overflows nor loses precision, and at θ = 1 every term is exactly zero.
pub fn product_approx_check(
    theta: f64,
    x_values: &[u64],
) -> Result<Vec<(u64, f64)>, VerificationError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(VerificationError::InvalidTheta(theta));
    }
    if x_values.first() == Some(&0) || x_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(VerificationError::NotAscending);
    }
    let mut out = Vec::with_capacity(x_values.len());
    let mut log_ratio = 0.0;
    let mut k = 0u64;
    for &x in x_values {
        while k < x {
            k += 1;
            let kf = k as f64;
            log_ratio += theta * (1.0 / kf).ln_1p() - (theta / kf).ln_1p();
        }
        out.push((x, log_ratio.exp()));
    }
    Ok(out)
}

/// `(R, ∫_1^R x^α dx)` in closed form for each upper limit.
pub fn integral_convergence_probe(
    alpha: f64,
    upper: &[f64],
) -> Result<Vec<(f64, f64)>, VerificationError> {
    if upper.first().is_some_and(|&r| !(r > 1.0)) || upper.windows(2).any(|w| w[0] >= w[1]) {
        return Err(VerificationError::NotAscending);
    }
    Ok(upper
        .iter()
        .map(|&r| {
            let v = if alpha == -1.0 {
                r.ln()
            } else {
                let k = alpha + 1.0;
                (k * r.ln()).exp_m1() / k
            };
            (r, v)
        })
        .collect())
}

/// Probe for the rank-frequency law paired with `θ`: the power exponent
/// `α = -1/(θ-1)` for `θ ≠ 1`, and `∫_1^R e^(-(r-1)) dr` at `θ = 1`.
pub fn theta_convergence_probe(
    theta: f64,
    upper: &[f64],
) -> Result<Vec<(f64, f64)>, VerificationError> {
    if !theta.is_finite() {
        return Err(VerificationError::InvalidTheta(theta));
    }
    if theta == 1.0 {
        let values = integral_convergence_probe(0.0, upper)?;
        return Ok(values
            .into_iter()
            .map(|(r, _)| (r, -(-(r - 1.0)).exp_m1()))
            .collect());
    }
    integral_convergence_probe(-1.0 / (theta - 1.0), upper)
}

/// Classifies a probe sequence evaluated on geometrically spaced upper limits.
///
/// The sequence is taken as bounded when its increments shrink by a fixed
/// factor below one from each limit to the next (a ratio test), so the
/// remaining tail is dominated by a convergent geometric series. Logarithmic
/// growth has constant increments and power growth increasing ones.
pub fn is_bounded(values: &[(f64, f64)]) -> bool {
    const RATIO: f64 = 1.0 - 1e-9;
    let increments: Vec<f64> = values.windows(2).map(|w| w[1].1 - w[0].1).collect();
    increments.len() >= 2 && increments.windows(2).all(|d| d[1] <= RATIO * d[0])
}

/// Upper limits `10^1 .. 10^decades`.
pub fn decade_limits(decades: u32) -> Vec<f64> {
    (1..=decades as i32).map(|d| 10f64.powi(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turing_bound_at_one_hundred() {
        let r = turing_bound_check(100, 100, None).unwrap();
        assert!(r.rows[0].residual <= 1e-4);
        assert!(r.all_pass);
    }

    #[test]
    fn turing_residual_scaled_by_x_squared_stays_below_one() {
        let r = turing_bound_check(2, 5000, None).unwrap();
        let scaled: Vec<f64> = r
            .rows
            .iter()
            .map(|row| row.residual * (row.x * row.x) as f64)
            .collect();
        assert!(scaled.iter().all(|&s| s < 1.0));
        // approaches 1/2 from below
        assert!(scaled[0] < 0.2);
        assert!((scaled.last().unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn invalid_ranges() {
        assert!(turing_bound_check(1, 10, None).is_err());
        assert!(turing_bound_check(10, 9, None).is_err());
        assert!(matches!(
            general_bound_check(1.0, 10, 20, None),
            Err(VerificationError::ThetaIsOne)
        ));
        assert!(general_bound_check(-0.5, 10, 20, None).is_err());
        assert!(turing_bound_check(2, 3, Some(-1.0)).is_err());
    }

    #[test]
    fn general_bound_family() {
        for theta in [1.5, 3.0] {
            let r = general_bound_check(theta, 10, 10_000, None).unwrap();
            assert!(r.all_pass, "theta = {theta}");
            let alpha: f64 = theta - 1.0;
            assert_eq!(r.rows[0].bound, (alpha * alpha - 1.0).abs() / 100.0);
        }
    }

    #[test]
    fn zipf_case_residual_is_rounding_only() {
        let r = general_bound_check(2.0, 10, 10_000, Some(DEFAULT_EPSILON)).unwrap();
        assert!(r.all_pass);
        assert!(r
            .rows
            .iter()
            .all(|row| row.bound == 0.0 && row.residual < 1e-15));
    }

    #[test]
    fn product_telescopes() {
        let xs: Vec<u64> = (1..=2000).collect();
        for (_, ratio) in product_approx_check(1.0, &xs).unwrap() {
            assert_eq!(ratio, 1.0);
        }
        for (x, ratio) in product_approx_check(2.0, &xs).unwrap() {
            let closed = 2.0 * (x as f64 + 1.0) / (x as f64 + 2.0);
            assert!((ratio - closed).abs() <= 1e-12 * closed);
        }
        assert!(product_approx_check(1.5, &[3, 2]).is_err());
        assert!(product_approx_check(1.5, &[0, 2]).is_err());
    }

    #[test]
    fn product_limit_is_gamma_of_one_plus_theta() {
        // Γ(2.5) = 3√π/4
        let limit = 0.75 * std::f64::consts::PI.sqrt();
        let v = product_approx_check(1.5, &[1_000_000]).unwrap()[0].1;
        assert!((v - limit).abs() < 1e-6);
    }

    #[test]
    fn integral_probe_branches() {
        let lim = decade_limits(6);
        let a = integral_convergence_probe(-2.0, &lim).unwrap();
        for &(r, v) in &a {
            assert!((v - (1.0 - 1.0 / r)).abs() < 1e-15);
        }
        assert!(is_bounded(&a));
        let b = integral_convergence_probe(-1.0, &lim).unwrap();
        assert!((b[2].1 - 1000f64.ln()).abs() < 1e-15);
        assert!(!is_bounded(&b));
        let c = integral_convergence_probe(-0.5, &lim).unwrap();
        assert!((c[0].1 - 2.0 * (10f64.sqrt() - 1.0)).abs() < 1e-13);
        assert!(!is_bounded(&c));
        assert!(integral_convergence_probe(-2.0, &[1.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let r = turing_bound_check(2, 3, None).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# schema: freqlaw.bound_report.v1"));
        assert_eq!(lines[1], "x,residual,bound,margin,pass");
        assert!(lines[2].starts_with("2,"));
        assert_eq!(lines.len(), 4);
    }
}
