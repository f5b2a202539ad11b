use std::sync::Arc;

use num_complex::Complex64;

use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::quadrature::Node;
use crate::spectral::{propagate_spectral, ComplexField, Grid};

/// `|z|^p` given `|z|^2`, avoiding `powf` for integer powers.
#[inline]
pub(crate) fn abs_pow(norm_sqr: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p <= 64.0 {
        let k = p as i32;
        if k % 2 == 0 {
            norm_sqr.powi(k / 2)
        } else {
            norm_sqr.powi(k / 2) * norm_sqr.sqrt()
        }
    } else {
        norm_sqr.powf(0.5 * p)
    }
}

/// Sigma-quadrature of free-flow conjugated power nonlinearities on one grid:
/// evaluates `sum_j weight_j e^{-i s_j \Delta}[|w_j|^p w_j]` with
/// `w_j = e^{i s_j \Delta} u`, and exposes the intermediate `w_j`.
///
/// Inputs and outputs are unitary spectral coefficients.
#[derive(Debug, Clone)]
pub(crate) struct SigmaOperator {
    grid: Arc<Grid>,
    power: f64,
    nodes: Vec<Node>,
    // e^{-i s_j |xi|^2}, the symbol of e^{i s_j \Delta}
    phases: Vec<Vec<Complex64>>,
}

impl SigmaOperator {
    pub fn new(grid: &Arc<Grid>, power: f64, nodes: &[Node]) -> Self {
        let phases = nodes
            .iter()
            .map(|q| {
                grid.k_squared()
                    .iter()
                    .map(|&k2| Complex64::from_polar(1.0, -q.sigma * k2))
                    .collect()
            })
            .collect();
        SigmaOperator {
            grid: Arc::clone(grid),
            power,
            nodes: nodes.to_vec(),
            phases,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Calls `f(node, w)` with the physical-space values of `w = e^{i s \Delta} u`
    /// for every node.
    pub fn for_each_field(&self, u_hat: &[Complex64], mut f: impl FnMut(Node, &[Complex64])) {
        let mut buf = vec![Complex64::new(0.0, 0.0); u_hat.len()];
        for (q, phase) in self.nodes.iter().zip(&self.phases) {
            for ((b, &c), &e) in buf.iter_mut().zip(u_hat).zip(phase) {
                *b = c * e;
            }
            self.grid.inverse(&mut buf);
            f(*q, &buf);
        }
    }

    /// Writes the spectral coefficients of the averaged nonlinearity into `out`.
    pub fn apply(&self, u_hat: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        self.apply_with_potential(u_hat, out).map(|_| ())
    }

    /// As [`apply`](Self::apply), also returning the quadrature of
    /// `\int |w|^{p+2} dx` over the nodes.
    pub fn apply_with_potential(&self, u_hat: &[Complex64], out: &mut [Complex64]) -> Result<f64> {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let mut buf = vec![Complex64::new(0.0, 0.0); u_hat.len()];
        let mut potential = 0.0;
        for (q, phase) in self.nodes.iter().zip(&self.phases) {
            for ((b, &c), &e) in buf.iter_mut().zip(u_hat).zip(phase) {
                *b = c * e;
            }
            self.grid.inverse(&mut buf);
            let mut sum = 0.0;
            for z in buf.iter_mut() {
                let n2 = z.norm_sqr();
                let a = abs_pow(n2, self.power);
                let g = *z * a;
                if !(g.re.is_finite() && g.im.is_finite()) {
                    return Err(Error::Overflow);
                }
                sum += a * n2;
                *z = g;
            }
            potential += q.weight * sum;
            self.grid.forward(&mut buf);
            for ((o, &b), &e) in out.iter_mut().zip(&buf).zip(phase) {
                *o += q.weight * b * e.conj();
            }
        }
        Ok(potential * self.grid.cell_volume())
    }
}

/// `N(u) = \int_0^1 e^{-i s \Delta}[|e^{i s \Delta} u|^p e^{i s \Delta} u] ds`
/// with the sigma rule of `params`. The sign and weight of the equation are
/// not applied.
pub fn dmnls_nonlinearity(u: &ComplexField, params: &ModelParams) -> Result<ComplexField> {
    params.validate()?;
    u.ensure_finite()?;
    let grid = u.grid();
    let op = SigmaOperator::new(grid, params.power, &params.sigma_nodes);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    op.apply(&u.to_spectral(), &mut out)?;
    Ok(ComplexField::from_spectral(grid, out))
}

/// Right-hand side of the interaction-picture equation
/// `v' = -i c e^{-it\Delta} N(e^{it\Delta} v)`, `c` the signed coefficient.
pub fn rhs_interaction_picture(v: &ComplexField, t: f64, params: &ModelParams) -> Result<ComplexField> {
    params.validate()?;
    v.ensure_finite()?;
    let grid = v.grid();
    let rhs = InteractionRhs::new(grid, params);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    rhs.eval(t, &v.to_spectral(), &mut out)?;
    Ok(ComplexField::from_spectral(grid, out))
}

/// Interaction-picture vector field acting on spectral coefficients.
#[derive(Debug, Clone)]
pub(crate) struct InteractionRhs {
    op: SigmaOperator,
    coefficient: f64,
}

impl InteractionRhs {
    pub fn new(grid: &Arc<Grid>, params: &ModelParams) -> Self {
        InteractionRhs {
            op: SigmaOperator::new(grid, params.power, &params.sigma_nodes),
            coefficient: params.coefficient(),
        }
    }

    pub fn eval(&self, t: f64, v_hat: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        if self.coefficient == 0.0 {
            out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            return Ok(());
        }
        let k_sq = self.op.grid().k_squared();
        let mut u_hat = v_hat.to_vec();
        propagate_spectral(k_sq, &mut u_hat, t);
        self.op.apply(&u_hat, out)?;
        propagate_spectral(k_sq, out, -t);
        let factor = Complex64::new(0.0, -self.coefficient);
        out.iter_mut().for_each(|z| *z *= factor);
        Ok(())
    }
}
