use serde::{Deserialize, Serialize};

use crate::besov::linear_fit;
use crate::error::{Error, Result};

/// Values at or below this magnitude carry no slope information.
pub const DECAY_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayVerdict {
    Fitted,
    /// Fewer than four values above the floor; treated as converged.
    BelowFloor,
}

/// Log-log fit of `|value|` against ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub verdict: DecayVerdict,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub used: usize,
    pub excluded: usize,
}

impl DecayFit {
    pub fn is_fitted(&self) -> bool {
        self.verdict == DecayVerdict::Fitted
    }
}

pub fn fit_decay_rate(pairs: &[(f64, f64)]) -> Result<DecayFit> {
    if pairs.len() < 4 {
        return Err(Error::Degenerate(format!("{} pairs, at least 4 needed", pairs.len())));
    }
    let mut eps: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::param("eps", "values must be positive"));
    }
    eps.sort_by(f64::total_cmp);
    if eps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::param("eps", "values must be distinct"));
    }
    let kept: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(_, v)| v.abs() > DECAY_FLOOR)
        .map(|&(e, v)| (e.ln(), v.abs().ln()))
        .collect();
    let excluded = pairs.len() - kept.len();
    if kept.len() < 4 {
        return Ok(DecayFit {
            verdict: DecayVerdict::BelowFloor,
            slope: f64::NAN,
            intercept: f64::NAN,
            r_squared: f64::NAN,
            used: kept.len(),
            excluded,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = kept.into_iter().unzip();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(DecayFit {
        verdict: DecayVerdict::Fitted,
        slope,
        intercept,
        r_squared,
        used: xs.len(),
        excluded,
    })
}

/// Predicted decay exponents of `R_1 … R_7` and the regularity condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub alpha: f64,
    pub beta: f64,
    pub exponents: [f64; 7],
    /// `min(2α + β, α + 2β)`.
    pub threshold: f64,
    pub hypothesis: bool,
}

pub fn predict_exponents(alpha: f64, beta: f64) -> Prediction {
    let transport = (alpha + beta).min(2.0 * alpha + beta - 1.0);
    let pressure = (2.0 * beta).min(2.0 * beta + alpha - 1.0);
    let density = (alpha + beta).min(alpha + 2.0 * beta - 1.0);
    let threshold = (2.0 * alpha + beta).min(alpha + 2.0 * beta);
    Prediction {
        alpha,
        beta,
        exponents: [transport, transport, pressure, pressure, density, density, density],
        threshold,
        hypothesis: threshold > 1.0,
    }
}
