use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::{loglog_fit, FitResult};
use super::pce::centered_derivative;
use crate::dynamics::{abs_pow, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::{fourier_transform, free_propagate, ComplexField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub times: Vec<f64>,
    /// `Im <u(t), e^{it\Delta} psi>`
    pub overlap: Vec<f64>,
    /// Interior checkpoint times carrying a derivative estimate.
    pub derivative_times: Vec<f64>,
    pub derivative: Vec<f64>,
    /// Power-law fit of the derivative against `t` on the window; absent when
    /// the derivative is not positive throughout the window.
    pub fit: Option<FitResult>,
    pub derivative_changes_sign: bool,
    /// Whether the overlap strictly increases across the window.
    pub overlap_increasing: bool,
    /// `< |\hat phi|^p \hat phi, \hat psi >` with `phi` the first checkpoint.
    pub c0: (f64, f64),
    pub warnings: Vec<String>,
}

/// Tracks the overlap of the solution with a freely evolving test wave
/// `e^{it\Delta} psi` and fits the decay of its time derivative on `window`.
pub fn nonscattering_probe(trajectory: &Trajectory, psi: &ComplexField, window: (f64, f64)) -> Result<ProbeReport> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::InvalidWindow(format!(
            "probe window must satisfy 0 < t_lo < t_hi, got [{lo}, {hi}]"
        )));
    }
    let Some(first) = trajectory.checkpoints.first() else {
        return Err(Error::InvalidWindow("trajectory has no checkpoints".into()));
    };
    first.field.ensure_same_grid(psi)?;
    let (d, p) = (trajectory.params.dimension as f64, trajectory.params.power);
    let mut warnings = Vec::new();
    if p > 1.0 || p > 2.0 / d {
        warnings.push(format!("probe is meant for p <= 1 and p <= 2/d; got p = {p}, d = {d}"));
    }

    let times = trajectory.times();
    let overlap = trajectory
        .checkpoints
        .iter()
        .map(|c| Ok(c.field.inner(&free_propagate(psi, c.time)?).im))
        .collect::<Result<Vec<f64>>>()?;

    let mut derivative_times = Vec::new();
    let mut derivative = Vec::new();
    for k in 1..times.len().saturating_sub(1) {
        derivative_times.push(times[k]);
        derivative.push(centered_derivative(
            [times[k - 1], times[k], times[k + 1]],
            [overlap[k - 1], overlap[k], overlap[k + 1]],
        ));
    }

    let in_window: Vec<(f64, f64)> = derivative_times
        .iter()
        .zip(&derivative)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(t, v)| (*t, *v))
        .collect();
    let derivative_changes_sign = in_window.iter().any(|(_, v)| *v <= 0.0);
    let fit = if derivative_changes_sign || in_window.len() < 2 {
        None
    } else {
        let (xs, ys): (Vec<f64>, Vec<f64>) = in_window.into_iter().unzip();
        Some(loglog_fit(&xs, &ys, window)?)
    };
    if derivative_changes_sign {
        warnings.push("overlap derivative is not positive on the whole window".into());
    }

    let window_overlap: Vec<f64> = times
        .iter()
        .zip(&overlap)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(_, o)| *o)
        .collect();
    let overlap_increasing = window_overlap.len() >= 2 && window_overlap.windows(2).all(|w| w[1] > w[0]);

    let phi_hat = fourier_transform(&first.field)?;
    let psi_hat = fourier_transform(psi)?;
    let grid = psi.grid();
    let dxi = (2.0 * std::f64::consts::PI / grid.box_length()).powi(grid.dimension() as i32);
    let c0: Complex64 = phi_hat
        .iter()
        .zip(&psi_hat)
        .map(|(f, g)| (f * abs_pow(f.norm_sqr(), p)).conj() * g)
        .sum::<Complex64>()
        * dxi;

    Ok(ProbeReport {
        times,
        overlap,
        derivative_times,
        derivative,
        fit,
        derivative_changes_sign,
        overlap_increasing,
        c0: (c0.re, c0.im),
        warnings,
    })
}
