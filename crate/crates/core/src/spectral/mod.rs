//! Periodic lattice, complex fields on it, Fourier-multiplier operators and
//! norms.

mod field;
mod grid;
mod norm;
mod ops;

pub use field::ComplexField;
pub use grid::Grid;
pub use norm::{boundary_mass_fraction, norm, NormSpec, DEFAULT_BOUNDARY_THRESHOLD};
pub use ops::{fourier_transform, fractional_galilean, free_propagate, galilean_apply, gradient, FRACTIONAL_T_EPS};

pub(crate) use norm::lebesgue;
pub(crate) use ops::propagate_spectral;
