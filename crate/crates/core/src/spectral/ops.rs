//! Fourier-multiplier operators on [`ComplexField`]s.
//!
//! The free propagator `e^{it\Delta}` is the multiplier `e^{-it|xi|^2}`, so
//! `u(t) = e^{it\Delta} u_0` solves `i u_t + \Delta u = 0`.

use num_complex::Complex64;

use super::field::ComplexField;
use crate::error::{Error, Result};

/// Below this `|t|` the fractional Galilean operator uses its `t = 0` form.
pub const FRACTIONAL_T_EPS: f64 = 1e-8;

/// Multiplies spectral coefficients by `e^{-it|xi|^2}` in place.
pub(crate) fn propagate_spectral(k_sq: &[f64], coeffs: &mut [Complex64], t: f64) {
    if t == 0.0 {
        return;
    }
    for (c, &k2) in coeffs.iter_mut().zip(k_sq) {
        *c *= Complex64::from_polar(1.0, -t * k2);
    }
}

/// `e^{it\Delta} u`.
pub fn free_propagate(u: &ComplexField, t: f64) -> Result<ComplexField> {
    u.ensure_finite()?;
    let grid = u.grid();
    let mut coeffs = u.to_spectral();
    propagate_spectral(grid.k_squared(), &mut coeffs, t);
    Ok(ComplexField::from_spectral(grid, coeffs))
}

/// Spectral partial derivatives, one field per axis.
pub fn gradient(u: &ComplexField) -> Result<Vec<ComplexField>> {
    u.ensure_finite()?;
    let grid = u.grid();
    let coeffs = u.to_spectral();
    Ok((0..grid.dimension())
        .map(|axis| {
            let xi = grid.wavenumbers_odd(axis);
            let c = coeffs
                .iter()
                .zip(xi)
                .map(|(&z, &k)| z * Complex64::new(0.0, k))
                .collect();
            ComplexField::from_spectral(grid, c)
        })
        .collect())
}

/// Components of `J(t) u = x u + 2it \nabla u`.
pub fn galilean_apply(u: &ComplexField, t: f64) -> Result<Vec<ComplexField>> {
    let grads = gradient(u)?;
    let grid = u.grid();
    Ok(grads
        .into_iter()
        .enumerate()
        .map(|(axis, mut g)| {
            let x = grid.positions(axis);
            let two_it = Complex64::new(0.0, 2.0 * t);
            for ((gv, &uv), &xv) in g.values_mut().iter_mut().zip(u.values()).zip(x) {
                *gv = uv * xv + two_it * *gv;
            }
            g
        })
        .collect())
}

/// Fractional Galilean operator
/// `J^gamma(t) = e^{i|x|^2/4t} (-4t^2 \Delta)^{gamma/2} e^{-i|x|^2/4t}`,
/// with `J^gamma(0) = |x|^gamma`.
pub fn fractional_galilean(u: &ComplexField, t: f64, gamma: f64) -> Result<ComplexField> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fractional Galilean exponent must lie in (0, 1], got {gamma}"
        )));
    }
    u.ensure_finite()?;
    let grid = u.grid();
    let r2 = grid.radius_squared();
    if t.abs() < FRACTIONAL_T_EPS {
        let values = u
            .values()
            .iter()
            .zip(r2)
            .map(|(&z, &r)| z * r.powf(0.5 * gamma))
            .collect();
        return ComplexField::from_values(grid, values);
    }
    let chirp = |r: f64| Complex64::from_polar(1.0, r / (4.0 * t));
    let mut data: Vec<Complex64> = u.values().iter().zip(r2).map(|(&z, &r)| z * chirp(r).conj()).collect();
    grid.forward(&mut data);
    let scale = (2.0 * t.abs()).powf(gamma);
    for (c, &k2) in data.iter_mut().zip(grid.k_squared()) {
        *c *= scale * k2.powf(0.5 * gamma);
    }
    grid.inverse(&mut data);
    for (z, &r) in data.iter_mut().zip(r2) {
        *z *= chirp(r);
    }
    ComplexField::from_values(grid, data)
}

/// Samples of the continuous transform
/// `\hat u(xi) = (2 pi)^{-d/2} \int e^{-i x . xi} u(x) dx` on the frequency
/// lattice, in FFT ordering.
pub fn fourier_transform(u: &ComplexField) -> Result<Vec<Complex64>> {
    u.ensure_finite()?;
    let grid = u.grid();
    let d = grid.dimension();
    let n = grid.points_per_axis() as f64;
    let scale = (grid.box_length() / (2.0 * std::f64::consts::PI * n).sqrt()).powi(d as i32);
    let half = 0.5 * grid.box_length();
    let mut coeffs = u.to_spectral();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        // The lattice starts at -L/2, which shifts the phase of each mode.
        let shift: f64 = (0..d).map(|a| grid.wavenumbers(a)[idx] * half).sum();
        *c *= Complex64::from_polar(scale, shift);
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    #[test]
    fn constant_is_fixed_by_propagator() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let c = Complex64::new(0.3, -1.2);
        let u = ComplexField::constant(&g, c);
        let v = free_propagate(&u, 2.7).unwrap();
        for z in v.values() {
            assert!((z - c).norm() < 1e-14);
        }
    }

    #[test]
    fn plane_wave_derivative() {
        let l = 20.0;
        let g = Grid::new(1, 64, l).unwrap();
        let k = 2.0 * PI * 3.0 / l;
        let u = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, k * x[0]));
        let du = &gradient(&u).unwrap()[0];
        for (d, z) in du.values().iter().zip(u.values()) {
            assert!((d - Complex64::new(0.0, k) * z).norm() < 1e-12);
        }
    }

    #[test]
    fn sine_derivative_is_cosine() {
        let l = 12.0;
        let g = Grid::new(1, 32, l).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((2.0 * PI * x[0] / l).sin(), 0.0));
        let du = &gradient(&u).unwrap()[0];
        for (d, &x) in du.values().iter().zip(g.coords()) {
            let exact = 2.0 * PI / l * (2.0 * PI * x / l).cos();
            assert!((d.re - exact).abs() < 1e-13 && d.im.abs() < 1e-13);
        }
    }

    #[test]
    fn constant_has_zero_gradient() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        let u = ComplexField::constant(&g, Complex64::new(2.0, 1.0));
        for du in gradient(&u).unwrap() {
            assert!(du.values().iter().all(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn galilean_at_zero_time_is_position() {
        let g = Grid::new(1, 64, 16.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let j = &galilean_apply(&u, 0.0).unwrap()[0];
        for ((a, b), &x) in j.values().iter().zip(u.values()).zip(g.coords()) {
            assert_eq!(*a, b * x);
        }
    }

    #[test]
    fn fractional_at_zero_time_is_weight() {
        let g = Grid::new(1, 64, 16.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.5));
        let j = fractional_galilean(&u, 0.0, 0.5).unwrap();
        for ((a, b), &x) in j.values().iter().zip(u.values()).zip(g.coords()) {
            assert!((a - b * x.abs().sqrt()).norm() < 1e-15);
        }
    }

    #[test]
    fn fractional_rejects_bad_exponent() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let u = ComplexField::zeros(&g);
        assert!(fractional_galilean(&u, 1.0, 0.0).is_err());
        assert!(fractional_galilean(&u, 1.0, 1.5).is_err());
    }

    #[test]
    fn gaussian_transform() {
        // e^{-x^2} has transform 2^{-1/2} e^{-xi^2/4}
        let g = Grid::new(1, 256, 32.0).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let f = fourier_transform(&u).unwrap();
        for (z, &xi) in f.iter().zip(g.frequencies()) {
            let exact = (-xi * xi / 4.0).exp() / 2f64.sqrt();
            assert!((z - exact).norm() < 1e-13, "{xi}: {z}");
        }
    }

    #[test]
    fn non_finite_input_rejected() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let mut u = ComplexField::zeros(&g);
        u.values_mut()[3] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(free_propagate(&u, 1.0), Err(Error::NonFinite));
        assert!(gradient(&u).is_err());
    }
}
