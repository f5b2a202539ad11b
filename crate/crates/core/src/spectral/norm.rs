use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::ComplexField;
use crate::error::{Error, Result};

/// Default tolerated fraction of the mass sitting in the outer band.
pub const DEFAULT_BOUNDARY_THRESHOLD: f64 = 1e-8;

/// Points with `|x_j| >= 0.45 L` on any axis form the outer 10% band.
const BOUNDARY_BAND: f64 = 0.45;

/// Which norm [`norm`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    /// `L^r`, with `r = f64::INFINITY` for the maximum modulus.
    Lr { r: f64 },
    /// Inhomogeneous Sobolev, multiplier `<xi>^s`.
    SobolevHs { s: f64 },
    /// Homogeneous Sobolev, multiplier `|xi|^s`.
    HomSobolev { s: f64 },
    /// `|| |x|^gamma u ||_2`.
    WeightedL2 { gamma: f64 },
    /// `sqrt(||u||_{H^1}^2 + ||x u||_2^2)`.
    Sigma,
}

impl NormSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidParameter(format!("{what} must be >= 0, got {v}")));
        match *self {
            NormSpec::Lr { r } if !(r >= 1.0) => Err(Error::InvalidParameter(format!(
                "Lebesgue exponent must be >= 1, got {r}"
            ))),
            NormSpec::SobolevHs { s } | NormSpec::HomSobolev { s } if !(s >= 0.0 && s.is_finite()) => {
                bad("Sobolev index", s)
            }
            NormSpec::WeightedL2 { gamma } if !(gamma >= 0.0 && gamma.is_finite()) => bad("weight exponent", gamma),
            _ => Ok(()),
        }
    }
}

/// Discrete quadrature of the requested norm.
pub fn norm(u: &ComplexField, spec: NormSpec) -> Result<f64> {
    spec.validate()?;
    u.ensure_finite()?;
    let grid = u.grid();
    let dv = grid.cell_volume();
    Ok(match spec {
        NormSpec::Lr { r } => lebesgue(u.values(), r, dv),
        NormSpec::SobolevHs { s } => {
            spectral_weighted(&u.to_spectral(), grid.k_squared(), |k2| (1.0 + k2).powf(0.5 * s), dv)
        }
        NormSpec::HomSobolev { s } => spectral_weighted(&u.to_spectral(), grid.k_squared(), |k2| k2.powf(0.5 * s), dv),
        NormSpec::WeightedL2 { gamma } => {
            let sum: f64 = u
                .values()
                .iter()
                .zip(grid.radius_squared())
                .map(|(z, &r2)| z.norm_sqr() * r2.powf(gamma))
                .sum();
            (sum * dv).sqrt()
        }
        NormSpec::Sigma => {
            let coeffs = u.to_spectral();
            let h1 = spectral_weighted(&coeffs, grid.k_squared(), |k2| (1.0 + k2).sqrt(), dv);
            let xu: f64 = u
                .values()
                .iter()
                .zip(grid.radius_squared())
                .map(|(z, &r2)| z.norm_sqr() * r2)
                .sum::<f64>()
                * dv;
            (h1 * h1 + xu).sqrt()
        }
    })
}

/// `(sum |z|^r dv)^{1/r}`, or the maximum modulus for `r = inf`.
pub(crate) fn lebesgue(values: &[Complex64], r: f64, dv: f64) -> f64 {
    if r.is_infinite() {
        return values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let sum: f64 = if r == 2.0 {
        values.iter().map(|z| z.norm_sqr()).sum()
    } else {
        values.iter().map(|z| z.norm().powf(r)).sum()
    };
    (sum * dv).powf(1.0 / r)
}

// Unitary coefficients c_k satisfy sum |u_j|^2 = sum |c_k|^2, so the
// continuous L^2 norm picks up the same cell volume on both sides.
fn spectral_weighted(coeffs: &[Complex64], k_sq: &[f64], weight: impl Fn(f64) -> f64, dv: f64) -> f64 {
    let sum: f64 = coeffs
        .iter()
        .zip(k_sq)
        .map(|(c, &k2)| {
            let w = weight(k2);
            c.norm_sqr() * w * w
        })
        .sum();
    (sum * dv).sqrt()
}

/// Fraction of the mass located where some coordinate has `|x_j| >= 0.45 L`.
/// Returns 0 for the zero field.
pub fn boundary_mass_fraction(u: &ComplexField) -> f64 {
    let grid = u.grid();
    let cut = BOUNDARY_BAND * grid.box_length();
    let mut total = 0.0;
    let mut outer = 0.0;
    for (idx, z) in u.values().iter().enumerate() {
        let m = z.norm_sqr();
        total += m;
        if (0..grid.dimension()).any(|a| grid.positions(a)[idx].abs() >= cut) {
            outer += m;
        }
    }
    if total > 0.0 {
        outer / total
    } else {
        0.0
    }
}
