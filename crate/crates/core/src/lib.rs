//! Pseudo-spectral simulation and verification tools for the
//! dispersion-managed nonlinear Schrödinger equation
//!
//! ```text
//! i u_t + \Delta u = ± \int_0^1 e^{-i s \Delta} [ |e^{i s \Delta} u|^p e^{i s \Delta} u ] ds
//! ```
//!
//! on a periodic box in one or two dimensions.

// `!(x > 0.0)` also rejects NaN, which is the point of every such check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod exponents;
pub mod ground_state;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
