//! Residual of the pseudoconformal energy identity
//!
//! ```text
//! d/dt [ ||Ju||^2 + c 8t^2/(p+2) P ]
//!   = c [ -((dp/2 - 4)/t) 8t^2/(p+2) P
//!         -((dp/2 - 2)/t^2) 8t^2/(p+2) S
//!         - 8 b(t)/(p+2) W1 ]
//! ```
//!
//! with `P = \int_0^1\int |w|^{p+2}`, `S = \int_0^1 s \int |w|^{p+2}`,
//! `W1 = \int |w(1)|^{p+2}` and `c` the signed coefficient of the
//! nonlinearity. The boundary coefficient `b(t)` is either `t + 1` or
//! `2t + 1`; both are offered because the two forms circulate.

use serde::{Deserialize, Serialize};

use super::series::DiagnosticsTimeSeries;
use crate::error::{Error, Result};

/// Largest checkpoint spacing accepted inside the check window.
pub const MAX_SPACING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientVariant {
    TPlus1,
    TwoTPlus1,
}

impl CoefficientVariant {
    pub fn boundary_coefficient(self, t: f64) -> f64 {
        match self {
            CoefficientVariant::TPlus1 => t + 1.0,
            CoefficientVariant::TwoTPlus1 => 2.0 * t + 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CoefficientVariant::TPlus1 => "t_plus_1",
            CoefficientVariant::TwoTPlus1 => "two_t_plus_1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PceReport {
    pub variant: CoefficientVariant,
    pub window: (f64, f64),
    pub times: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residual: Vec<f64>,
    /// `||lhs - rhs|| / ||rhs||` over the window; the absolute `||lhs - rhs||`
    /// when the right-hand side vanishes identically.
    pub aggregate_relative_residual: f64,
}

/// Three-point derivative at the middle of nonuniform nodes.
pub(crate) fn centered_derivative(t: [f64; 3], f: [f64; 3]) -> f64 {
    let h1 = t[1] - t[0];
    let h2 = t[2] - t[1];
    -h2 / (h1 * (h1 + h2)) * f[0] + (h2 - h1) / (h1 * h2) * f[1] + h1 / (h2 * (h1 + h2)) * f[2]
}

/// Compares the centered difference of the pseudoconformal energy with the
/// right-hand side of the identity at every checkpoint of `window` that has
/// neighbours on both sides.
pub fn pce_identity_check(
    series: &DiagnosticsTimeSeries,
    window: (f64, f64),
    variant: CoefficientVariant,
) -> Result<PceReport> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::InvalidWindow(format!("need t_lo < t_hi, got [{lo}, {hi}]")));
    }
    if lo <= 0.0 && hi >= 0.0 {
        return Err(Error::InvalidWindow(format!(
            "window [{lo}, {hi}] contains t = 0, where the identity is singular"
        )));
    }
    let recs = &series.records;
    let d = series.dimension as f64;
    let p = series.power;
    let c = series.coefficient;
    let e = |k: usize| {
        let r = &recs[k];
        r.ju_norm * r.ju_norm + c * 8.0 * r.t * r.t / (p + 2.0) * r.nl_potential
    };

    let mut times = Vec::new();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for k in 1..recs.len().saturating_sub(1) {
        let t = recs[k].t;
        if t < lo || t > hi {
            continue;
        }
        let (ta, tb) = (recs[k - 1].t, recs[k + 1].t);
        if (t - ta).abs() > MAX_SPACING + 1e-12 || (tb - t).abs() > MAX_SPACING + 1e-12 {
            return Err(Error::InvalidWindow(format!(
                "checkpoint spacing near t = {t} exceeds {MAX_SPACING}"
            )));
        }
        lhs.push(centered_derivative([ta, t, tb], [e(k - 1), e(k), e(k + 1)]));
        let r = &recs[k];
        let pref = 8.0 * t * t / (p + 2.0);
        rhs.push(
            c * (-(d * p / 2.0 - 4.0) / t * pref * r.nl_potential
                - (d * p / 2.0 - 2.0) / (t * t) * pref * r.sigma_weighted_potential
                - 8.0 * variant.boundary_coefficient(t) / (p + 2.0) * r.w1_norm_p2),
        );
        times.push(t);
    }
    if times.is_empty() {
        return Err(Error::InvalidWindow(format!("no interior checkpoints in [{lo}, {hi}]")));
    }
    let residual: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let l2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let denom = l2(&rhs);
    let aggregate_relative_residual = if denom > 0.0 {
        l2(&residual) / denom
    } else {
        l2(&residual)
    };
    Ok(PceReport {
        variant,
        window,
        times,
        lhs,
        rhs,
        residual,
        aggregate_relative_residual,
    })
}

/// Both variants side by side, with the one of smaller residual named.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PceComparison {
    pub t_plus_1: PceReport,
    pub two_t_plus_1: PceReport,
    pub selected: CoefficientVariant,
    /// Residual of the worse variant divided by that of the better one.
    pub separation: f64,
}

pub fn compare_variants(series: &DiagnosticsTimeSeries, window: (f64, f64)) -> Result<PceComparison> {
    let a = pce_identity_check(series, window, CoefficientVariant::TPlus1)?;
    let b = pce_identity_check(series, window, CoefficientVariant::TwoTPlus1)?;
    let (ra, rb) = (a.aggregate_relative_residual, b.aggregate_relative_residual);
    let selected = if rb <= ra {
        CoefficientVariant::TwoTPlus1
    } else {
        CoefficientVariant::TPlus1
    };
    let separation = ra.max(rb) / ra.min(rb);
    Ok(PceComparison {
        t_plus_1: a,
        two_t_plus_1: b,
        selected,
        separation,
    })
}
