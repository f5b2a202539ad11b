use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic lattice on the centered box `[-L/2, L/2)^d` together with its
/// dual frequency lattice and the FFT plans that connect the two.
///
/// Fields are stored row-major: in two dimensions index `i * n + j` holds
/// the point `(x_i, y_j)`.
pub struct Grid {
    dimension: usize,
    points_per_axis: usize,
    box_length: f64,
    spacing: f64,
    coords: Vec<f64>,
    freqs: Vec<f64>,
    // Per-point tables, each of length n^d.
    axis_position: Vec<Vec<f64>>,
    axis_wavenumber: Vec<Vec<f64>>,
    axis_wavenumber_odd: Vec<Vec<f64>>,
    radius_sq: Vec<f64>,
    k_sq: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dimension", &self.dimension)
            .field("points_per_axis", &self.points_per_axis)
            .field("box_length", &self.box_length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.points_per_axis == other.points_per_axis
            && self.box_length.to_bits() == other.box_length.to_bits()
    }
}

impl Grid {
    /// Builds a grid. `points_per_axis` must be a power of two no smaller
    /// than 16 and `dimension` must be 1 or 2.
    pub fn new(dimension: usize, points_per_axis: usize, box_length: f64) -> Result<Arc<Grid>> {
        if !(1..=2).contains(&dimension) {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dimension}")));
        }
        if points_per_axis < 16 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis must be a power of two >= 16, got {points_per_axis}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box_length must be positive and finite, got {box_length}"
            )));
        }

        let n = points_per_axis;
        let spacing = box_length / n as f64;
        let coords: Vec<f64> = (0..n).map(|i| -0.5 * box_length + i as f64 * spacing).collect();
        let freqs: Vec<f64> = (0..n)
            .map(|i| {
                let k = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
                2.0 * PI * k as f64 / box_length
            })
            .collect();
        let nyquist = n / 2;

        let total = n.pow(dimension as u32);
        let mut axis_position = vec![Vec::with_capacity(total); dimension];
        let mut axis_wavenumber = vec![Vec::with_capacity(total); dimension];
        let mut axis_wavenumber_odd = vec![Vec::with_capacity(total); dimension];
        for idx in 0..total {
            for axis in 0..dimension {
                let i = axis_index(idx, axis, dimension, n);
                axis_position[axis].push(coords[i]);
                axis_wavenumber[axis].push(freqs[i]);
                axis_wavenumber_odd[axis].push(if i == nyquist { 0.0 } else { freqs[i] });
            }
        }
        let radius_sq = (0..total)
            .map(|idx| (0..dimension).map(|a| axis_position[a][idx].powi(2)).sum())
            .collect();
        let k_sq = (0..total)
            .map(|idx| (0..dimension).map(|a| axis_wavenumber[a][idx].powi(2)).sum())
            .collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        Ok(Arc::new(Grid {
            dimension,
            points_per_axis,
            box_length,
            spacing,
            coords,
            freqs,
            axis_position,
            axis_wavenumber,
            axis_wavenumber_odd,
            radius_sq,
            k_sq,
            forward,
            inverse,
        }))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total number of lattice points, `n^d`.
    pub fn len(&self) -> usize {
        self.radius_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radius_sq.is_empty()
    }

    /// Volume of one lattice cell, the quadrature weight of every point.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dimension as i32)
    }

    /// Coordinates along one axis, strictly increasing from `-L/2`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Dual lattice along one axis in FFT ordering.
    pub fn frequencies(&self) -> &[f64] {
        &self.freqs
    }

    /// Position component `axis` of every lattice point.
    pub fn positions(&self, axis: usize) -> &[f64] {
        &self.axis_position[axis]
    }

    /// Frequency component `axis` of every spectral coefficient.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.axis_wavenumber[axis]
    }

    /// Like [`Grid::wavenumbers`] but with the Nyquist entry zeroed, the
    /// symbol used for first derivatives.
    pub fn wavenumbers_odd(&self, axis: usize) -> &[f64] {
        &self.axis_wavenumber_odd[axis]
    }

    /// `|x|^2` at every lattice point.
    pub fn radius_squared(&self) -> &[f64] {
        &self.radius_sq
    }

    /// `|xi|^2` at every spectral coefficient.
    pub fn k_squared(&self) -> &[f64] {
        &self.k_sq
    }

    /// Unitary forward DFT in place (scaled by `1/sqrt(n^d)`).
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Unitary inverse DFT in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let n = self.points_per_axis;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // Rows are contiguous; process_with_scratch handles multiples of n.
        plan.process_with_scratch(data, &mut scratch);
        if self.dimension == 2 {
            let mut column = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                for i in 0..n {
                    column[i] = data[i * n + j];
                }
                plan.process_with_scratch(&mut column, &mut scratch);
                for i in 0..n {
                    data[i * n + j] = column[i];
                }
            }
        }
        let scale = 1.0 / (self.len() as f64).sqrt();
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

fn axis_index(idx: usize, axis: usize, dimension: usize, n: usize) -> usize {
    if dimension == 1 {
        idx
    } else if axis == 0 {
        idx / n
    } else {
        idx % n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_frequencies_1d() {
        let g = Grid::new(1, 256, 64.0).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.len(), 256);
        for (i, &xi) in g.frequencies().iter().enumerate() {
            let k = if i < 128 { i as f64 } else { i as f64 - 256.0 };
            assert_eq!(xi, 2.0 * PI * k / 64.0);
        }
    }

    #[test]
    fn first_coordinate_is_left_edge() {
        let g = Grid::new(1, 16, 16.0).unwrap();
        assert_eq!(g.coords()[0], -8.0);
        assert!(g.coords().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn two_dimensional_grid() {
        let g = Grid::new(2, 128, 32.0).unwrap();
        assert_eq!(g.len(), 128 * 128);
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.cell_volume(), 0.0625);
        // row-major layout: second axis varies fastest
        assert_eq!(g.positions(0)[1], -16.0);
        assert_eq!(g.positions(1)[1], -15.75);
        assert_eq!(g.positions(0)[128], -15.75);
    }

    #[test]
    fn frequency_lattice_symmetric_except_nyquist() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let f = g.frequencies();
        for k in 1..32 {
            assert_eq!(f[k], -f[64 - k]);
        }
        assert!(f[32] < 0.0);
        assert_eq!(g.wavenumbers_odd(0)[32], 0.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(1, 100, 1.0).is_err());
        assert!(Grid::new(1, 8, 1.0).is_err());
        assert!(Grid::new(3, 16, 1.0).is_err());
        assert!(Grid::new(1, 16, 0.0).is_err());
        assert!(Grid::new(1, 16, f64::NAN).is_err());
    }

    #[test]
    fn spacing_times_points_is_length() {
        for &(n, l) in &[(16usize, 3.7f64), (1024, 256.0), (2048, 1e3 / 3.0)] {
            let g = Grid::new(1, n, l).unwrap();
            assert!((g.spacing() * n as f64 - l).abs() <= l * f64::EPSILON);
        }
    }

    #[test]
    fn transforms_are_unitary_inverses() {
        let g = Grid::new(2, 16, 5.0).unwrap();
        let orig: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        g.forward(&mut data);
        let e0: f64 = orig.iter().map(|z| z.norm_sqr()).sum();
        let e1: f64 = data.iter().map(|z| z.norm_sqr()).sum();
        assert!((e0 - e1).abs() < 1e-12 * e0);
        g.inverse(&mut data);
        for (a, b) in orig.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
