use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{fourier_transform, ComplexField, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    /// `|| |u(t)| - (2|t|)^{-d/2} |\hat phi(x/2t)| ||_2 / ||u(t)||_2`
    pub error: f64,
    pub warnings: Vec<String>,
}

/// Linear interpolation of lattice samples (FFT ordering) at a real
/// frequency index; zero outside the lattice.
fn lattice_value(samples: &dyn Fn(usize) -> f64, n: usize, k: f64) -> f64 {
    let half = (n / 2) as f64;
    if !(k >= -half && k <= half - 1.0) {
        return 0.0;
    }
    let k0 = k.floor();
    let frac = k - k0;
    let wrap = |m: f64| (m as i64).rem_euclid(n as i64) as usize;
    let a = samples(wrap(k0));
    if frac == 0.0 {
        return a;
    }
    a * (1.0 - frac) + samples(wrap(k0 + 1.0)) * frac
}

fn interpolate_modulus(grid: &Grid, modulus: &[f64], xi: &[f64]) -> f64 {
    let n = grid.points_per_axis();
    let dk = 2.0 * std::f64::consts::PI / grid.box_length();
    match xi.len() {
        1 => lattice_value(&|i| modulus[i], n, xi[0] / dk),
        _ => {
            let row = |k: f64| move |i: usize| lattice_value(&|j| modulus[i * n + j], n, k);
            let inner = row(xi[1] / dk);
            lattice_value(&inner, n, xi[0] / dk)
        }
    }
}

/// Relative L² distance between `|u(t)|` and the linear asymptotic profile
/// built from `phi`.
pub fn asymptotic_profile_error(u: &ComplexField, t: f64, phi: &ComplexField) -> Result<ProfileReport> {
    u.ensure_same_grid(phi)?;
    u.ensure_finite()?;
    let mut warnings = Vec::new();
    if t.abs() < 1.0 {
        warnings.push(format!("t = {t} is too early for the dispersive profile"));
    }
    let grid = u.grid();
    let d = grid.dimension();
    let modulus: Vec<f64> = fourier_transform(phi)?.iter().map(|z| z.norm()).collect();
    let scale = (2.0 * t.abs()).powf(-0.5 * d as f64);
    let mut xi = [0.0; 2];
    let mut diff = 0.0;
    let mut total = 0.0;
    for (idx, z) in u.values().iter().enumerate() {
        for (a, slot) in xi.iter_mut().enumerate().take(d) {
            *slot = grid.positions(a)[idx] / (2.0 * t);
        }
        let predicted = scale * interpolate_modulus(grid, &modulus, &xi[..d]);
        diff += (z.norm() - predicted).powi(2);
        total += z.norm_sqr();
    }
    let error = if total > 0.0 { (diff / total).sqrt() } else { 0.0 };
    Ok(ProfileReport { error, warnings })
}
