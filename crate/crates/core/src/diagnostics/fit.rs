use serde::{Deserialize, Serialize};

use super::series::DiagnosticsTimeSeries;
use crate::error::{Error, Result};

/// Minimum number of samples a decay fit accepts.
pub const MIN_FIT_POINTS: usize = 8;

/// Least-squares power law `quantity ~ e^{intercept} * x^{exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayQuantity {
    JuNorm,
    WNormP2,
}

/// `<t> = sqrt(1 + t^2)`.
pub fn japanese_bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Ordinary least squares of `ln y` against `ln x`.
pub fn loglog_fit(xs: &[f64], ys: &[f64], window: (f64, f64)) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter("fit inputs differ in length".into()));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidWindow("need at least two points".into()));
    }
    if let Some(bad) = xs.iter().zip(ys).find(|(x, y)| !(**x > 0.0 && **y > 0.0)) {
        return Err(Error::InvalidWindow(format!(
            "log-log fit needs positive data, got ({}, {})",
            bad.0, bad.1
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidWindow("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        exponent: slope,
        intercept: my - slope * mx,
        r_squared,
        window,
        points: xs.len(),
    })
}

/// Power-law exponent of `quantity` in `<t>` over the checkpoints inside
/// `window`.
pub fn decay_fit(series: &DiagnosticsTimeSeries, quantity: DecayQuantity, window: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::InvalidWindow(format!(
            "decay window must satisfy 0 < t_lo < t_hi, got [{lo}, {hi}]"
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = series
        .records
        .iter()
        .filter(|r| r.t >= lo && r.t <= hi)
        .map(|r| {
            let y = match quantity {
                DecayQuantity::JuNorm => r.ju_norm,
                DecayQuantity::WNormP2 => r.w_norm_p2,
            };
            (japanese_bracket(r.t), y)
        })
        .unzip();
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidWindow(format!(
            "{} checkpoints in [{lo}, {hi}], need {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    loglog_fit(&xs, &ys, window)
}
