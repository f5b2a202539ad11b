use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// One complex amplitude per lattice point.
#[derive(Debug, Clone)]
pub struct ComplexField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl PartialEq for ComplexField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl ComplexField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        ComplexField {
            grid: Arc::clone(grid),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn constant(grid: &Arc<Grid>, c: Complex64) -> Self {
        ComplexField {
            grid: Arc::clone(grid),
            values: vec![c; grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(ComplexField {
            grid: Arc::clone(grid),
            values,
        })
    }

    /// Samples `f` at every lattice point; `f` receives the position as a
    /// slice of length `d`.
    pub fn from_fn(grid: &Arc<Grid>, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let d = grid.dimension();
        let mut x = [0.0; 2];
        let values = (0..grid.len())
            .map(|idx| {
                for (axis, slot) in x.iter_mut().enumerate().take(d) {
                    *slot = grid.positions(axis)[idx];
                }
                f(&x[..d])
            })
            .collect();
        ComplexField {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn ensure_same_grid(&self, other: &ComplexField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `<self, other> = \int conj(self) * other dx`.
    pub fn inner(&self, other: &ComplexField) -> Complex64 {
        let dv = self.grid.cell_volume();
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * dv
    }

    /// `M(u) = ||u||_2^2`.
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.mass().sqrt()
    }

    pub fn conj(&self) -> ComplexField {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: Complex64) -> ComplexField {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexField {
        ComplexField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Pointwise `self - other`.
    pub fn sub(&self, other: &ComplexField) -> ComplexField {
        ComplexField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// Pointwise `self + other`.
    pub fn add(&self, other: &ComplexField) -> ComplexField {
        ComplexField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Unitary DFT coefficients of the field.
    pub fn to_spectral(&self) -> Vec<Complex64> {
        let mut data = self.values.clone();
        self.grid.forward(&mut data);
        data
    }

    /// Builds a field from unitary DFT coefficients.
    pub fn from_spectral(grid: &Arc<Grid>, mut coeffs: Vec<Complex64>) -> ComplexField {
        grid.inverse(&mut coeffs);
        ComplexField {
            grid: Arc::clone(grid),
            values: coeffs,
        }
    }
}
