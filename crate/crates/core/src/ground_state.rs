//! Optimizers of the global Strichartz–Gagliardo–Nirenberg quotient in one
//! dimension,
//!
//! `J[phi] = \int_{-S}^{S} \int |e^{is\Delta} phi|^{p+2} dx ds
//!           / (||phi||_2^{(p+8)/2} ||phi'||_2^{(p-4)/2})`,
//!
//! whose maximizers define the focusing blowup threshold.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::lp_integral;
use crate::dynamics::SigmaOperator;
use crate::error::{Error, Result};
use crate::quadrature::composite_gauss_legendre;
use crate::spectral::{free_propagate, ComplexField, Grid};

/// Armijo sufficient-increase constant.
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GroundStateConfig {
    /// Half-width `S` of the truncated sigma domain.
    pub sigma_half_width: f64,
    pub sigma_nodes_per_unit: usize,
    pub max_iterations: usize,
    /// Stop once an accepted step raises the quotient by less than this
    /// relative amount.
    pub gain_tolerance: f64,
    /// Iterates are held at `||phi'||^2 / ||phi||^2` equal to this value.
    /// The full-line quotient is dilation invariant, but the truncated one is
    /// not and would otherwise drift toward the grid scale.
    pub gradient_ratio: f64,
}

impl Default for GroundStateConfig {
    fn default() -> Self {
        GroundStateConfig {
            sigma_half_width: 8.0,
            sigma_nodes_per_unit: 32,
            max_iterations: 5000,
            gain_tolerance: 1e-10,
            gradient_ratio: 1.0,
        }
    }
}

impl GroundStateConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_half_width > 0.0 && self.sigma_half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma half-width must be positive, got {}",
                self.sigma_half_width
            )));
        }
        if self.sigma_nodes_per_unit == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "sigma_nodes_per_unit and max_iterations must be positive".into(),
            ));
        }
        if !(self.gradient_ratio > 0.0 && self.gradient_ratio.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gradient_ratio must be positive, got {}",
                self.gradient_ratio
            )));
        }
        if !(self.gain_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gain_tolerance must be positive, got {}",
                self.gain_tolerance
            )));
        }
        Ok(())
    }
}

/// Quantities of one evaluation of the quotient.
struct Evaluation {
    log_j: f64,
    potential: f64,
    mass: f64,
    /// `||phi'||_2^2`
    grad_sq: f64,
    /// Spectral coefficients of the truncated sigma-integrated nonlinearity.
    nonlinearity: Vec<Complex64>,
}

struct Quotient {
    grid: Arc<Grid>,
    power: f64,
    op: SigmaOperator,
}

impl Quotient {
    fn new(grid: &Arc<Grid>, p: f64, s: f64, nodes_per_unit: usize) -> Result<Self> {
        if grid.dimension() != 1 {
            return Err(Error::InvalidParameter(format!(
                "the quotient is defined in one dimension, got d = {}",
                grid.dimension()
            )));
        }
        if !(p > 4.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("the quotient needs p > 4, got {p}")));
        }
        if !(s > 0.0 && s.is_finite()) || nodes_per_unit == 0 {
            return Err(Error::InvalidParameter(format!(
                "need S > 0 and at least one node per unit, got S = {s}, {nodes_per_unit}"
            )));
        }
        let panels = (2.0 * s).ceil() as usize;
        let nodes = composite_gauss_legendre(-s, s, panels, nodes_per_unit)?;
        Ok(Quotient {
            grid: Arc::clone(grid),
            power: p,
            op: SigmaOperator::new(grid, p, &nodes),
        })
    }

    fn dv(&self) -> f64 {
        self.grid.cell_volume()
    }

    fn eval(&self, phi_hat: &[Complex64]) -> Result<Evaluation> {
        let dv = self.dv();
        let mass = phi_hat.iter().map(|z| z.norm_sqr()).sum::<f64>() * dv;
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter("the quotient is undefined at phi = 0".into()));
        }
        let grad_sq = phi_hat
            .iter()
            .zip(self.grid.k_squared())
            .map(|(z, &k2)| z.norm_sqr() * k2)
            .sum::<f64>()
            * dv;
        if !(grad_sq > 0.0) {
            return Err(Error::InvalidParameter(
                "the quotient is undefined for constant phi".into(),
            ));
        }
        let mut nonlinearity = vec![Complex64::new(0.0, 0.0); phi_hat.len()];
        let potential = self.op.apply_with_potential(phi_hat, &mut nonlinearity)?;
        let p = self.power;
        let log_j = potential.ln() - 0.25 * (p + 8.0) * mass.ln() - 0.25 * (p - 4.0) * grad_sq.ln();
        Ok(Evaluation {
            log_j,
            potential,
            mass,
            grad_sq,
            nonlinearity,
        })
    }

    /// L² gradient of `log J`:
    /// `(p+2) N/A - (p+8)/(2M) phi + (p-4)/(2K) \Delta phi`.
    fn gradient(&self, phi_hat: &[Complex64], e: &Evaluation) -> Vec<Complex64> {
        let p = self.power;
        let a = (p + 2.0) / e.potential;
        let b = 0.5 * (p + 8.0) / e.mass;
        let c = 0.5 * (p - 4.0) / e.grad_sq;
        phi_hat
            .iter()
            .zip(&e.nonlinearity)
            .zip(self.grid.k_squared())
            .map(|((&f, &n), &k2)| n * a - f * (b + c * k2))
            .collect()
    }

    fn real_inner(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum::<f64>() * self.dv()
    }
}

fn normalized(coeffs: Vec<Complex64>, dv: f64) -> Vec<Complex64> {
    let m = (coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() * dv).sqrt();
    coeffs.into_iter().map(|z| z / m).collect()
}

/// Multiplies by `e^{-tau |k|^2}` with `tau` chosen so that
/// `||phi'||^2 / ||phi||^2 = ratio`, then normalizes to unit mass.
fn retract(coeffs: Vec<Complex64>, k_sq: &[f64], ratio: f64, dv: f64) -> Result<Vec<Complex64>> {
    let power: Vec<f64> = coeffs.iter().map(|z| z.norm_sqr()).collect();
    let moments = |tau: f64| {
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (&a, &k2) in power.iter().zip(k_sq) {
            let w = a * (-2.0 * tau * k2).exp();
            m0 += w;
            m1 += w * k2;
            m2 += w * k2 * k2;
        }
        (m1 / m0, m2 / m0)
    };
    let mut tau = 0.0;
    let mut done = false;
    for _ in 0..100 {
        let (r, r2) = moments(tau);
        if (r - ratio).abs() <= 1e-14 * ratio {
            done = true;
            break;
        }
        // d r / d tau = -2 (E[k^4] - E[k^2]^2)
        let slope = -2.0 * (r2 - r * r);
        if !(slope < 0.0) {
            break;
        }
        let next = tau - (r - ratio) / slope;
        tau = if next.is_finite() { next } else { break };
    }
    if !done {
        return Err(Error::InvalidParameter(format!(
            "cannot bring the iterate to gradient ratio {ratio}"
        )));
    }
    let out = coeffs
        .into_iter()
        .zip(k_sq)
        .map(|(z, &k2)| z * (-tau * k2).exp())
        .collect();
    Ok(normalized(out, dv))
}

/// `phi(s x)` on the same lattice by trigonometric interpolation (the
/// Nyquist mode is dropped); points mapped outside the box wrap around.
fn dilate(phi: &ComplexField, s: f64) -> ComplexField {
    let grid = phi.grid();
    let n = grid.points_per_axis();
    let x0 = grid.coords()[0];
    let coeffs = phi.to_spectral();
    let freqs = grid.frequencies();
    let norm = 1.0 / (n as f64).sqrt();
    let values = grid
        .coords()
        .iter()
        .map(|&x| {
            (0..n)
                .filter(|&m| m != n / 2)
                .map(|m| coeffs[m] * Complex64::from_polar(norm, freqs[m] * (s * x - x0)))
                .sum()
        })
        .collect();
    ComplexField::from_values(grid, values).expect("same lattice")
}

/// Removes from `d` its components along `normals`, orthogonally in the
/// metric `<a, b>_P = Re<a, P^{-1} b>` where `d = P g`.
fn project(
    d: &mut [Complex64],
    g_dot: &[f64; 2],
    normals: [&[Complex64]; 2],
    pn: [&[Complex64]; 2],
    ip: impl Fn(&[Complex64], &[Complex64]) -> f64,
) {
    let a = [
        [ip(normals[0], pn[0]), ip(normals[0], pn[1])],
        [ip(normals[1], pn[0]), ip(normals[1], pn[1])],
    ];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < f64::MIN_POSITIVE {
        return;
    }
    let c0 = (a[1][1] * g_dot[0] - a[0][1] * g_dot[1]) / det;
    let c1 = (a[0][0] * g_dot[1] - a[1][0] * g_dot[0]) / det;
    for ((x, &p0), &p1) in d.iter_mut().zip(pn[0]).zip(pn[1]) {
        *x -= p0 * c0 + p1 * c1;
    }
}

/// `J[phi]` with the sigma integral over `[-s, s]` by composite
/// Gauss–Legendre on unit-length panels.
pub fn sgn_quotient(phi: &ComplexField, p: f64, s: f64, sigma_nodes_per_unit: usize) -> Result<f64> {
    phi.ensure_finite()?;
    let q = Quotient::new(phi.grid(), p, s, sigma_nodes_per_unit)?;
    Ok(q.eval(&phi.to_spectral())?.log_j.exp())
}

/// L² gradient `G` of `log J`, so that `d/de log J[phi + e eta] = Re<G, eta>`
/// at `e = 0`.
pub fn sgn_gradient(phi: &ComplexField, p: f64, s: f64, sigma_nodes_per_unit: usize) -> Result<ComplexField> {
    phi.ensure_finite()?;
    let q = Quotient::new(phi.grid(), p, s, sigma_nodes_per_unit)?;
    let phi_hat = phi.to_spectral();
    let e = q.eval(&phi_hat)?;
    Ok(ComplexField::from_spectral(phi.grid(), q.gradient(&phi_hat, &e)))
}

/// Relative estimate of the part of the sigma integral beyond `|s| > S`,
/// extrapolating `\int |e^{is\Delta} phi|^{p+2} dx ~ |s|^{-p/2}` from its
/// values at `s = +-S`.
pub fn sigma_tail_estimate(phi: &ComplexField, p: f64, s: f64, sigma_nodes_per_unit: usize) -> Result<f64> {
    let inside = sgn_quotient(phi, p, s, sigma_nodes_per_unit)?;
    let dv = phi.grid().cell_volume();
    let mut edge = 0.0;
    for sign in [-1.0, 1.0] {
        edge += lp_integral(free_propagate(phi, sign * s)?.values(), p + 2.0, dv);
    }
    let tail = edge * s / (0.5 * p - 1.0);
    let norms = phi.mass().powf(0.25 * (p + 8.0)) * (2.0 * kinetic(phi)?).powf(0.25 * (p - 4.0));
    Ok(tail / (inside * norms))
}

fn kinetic(phi: &ComplexField) -> Result<f64> {
    let q = phi.to_spectral();
    let grid = phi.grid();
    Ok(0.5
        * q.iter()
            .zip(grid.k_squared())
            .map(|(z, &k2)| z.norm_sqr() * k2)
            .sum::<f64>()
        * grid.cell_volume())
}

/// The optimizer candidate and the quantities derived from it.
///
/// The iterate is kept at unit mass. The optimizer in the normalization
/// `-Q + Q'' + \int e^{-is\Delta}(|e^{is\Delta}Q|^p e^{is\Delta}Q) ds = 0` is
/// `Q(x) = amplitude_scale * profile(x / length_scale)`; `mass_q`,
/// `kinetic_q`, the energies and the thresholds refer to that `Q`.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub power: f64,
    /// Unit-mass optimizer candidate.
    pub profile: ComplexField,
    pub quotient_value: f64,
    /// Quotient after each accepted step, starting with the initial guess.
    pub quotient_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Multipliers of `phi'' - alpha phi + beta N_S(phi) = 0` for the profile.
    pub alpha: f64,
    pub beta: f64,
    pub amplitude_scale: f64,
    pub length_scale: f64,
    pub mass_q: f64,
    /// `1/2 ||Q'||_2^2`
    pub kinetic_q: f64,
    /// `\int\int |e^{is\Delta} Q|^{p+2}` over the truncated real line.
    pub potential_q: f64,
    /// `kinetic_q - potential_q`, the energy over the real line in the
    /// convention of the threshold statement.
    pub energy_real_line: f64,
    /// The same energy with the sigma integral over `[0, 1]`.
    pub energy_unit_interval: f64,
    /// `M(Q)^{(p+8)/(p-8)} energy_real_line`.
    pub threshold_value: f64,
    /// `M(Q)^{(p+8)/(p-8)} (kinetic_q - potential_q/(p+2))`, the threshold
    /// with the Hamiltonian of the Euler–Lagrange equation.
    pub threshold_value_hamiltonian: f64,
    /// `||phi'' - alpha phi + beta N_S(phi)|| / (alpha ||phi||)`
    pub el_residual: f64,
    /// `||grad log J|| / ||phi||`
    pub gradient_norm: f64,
    pub sigma_truncation: f64,
    pub tail_estimate: f64,
    pub warnings: Vec<String>,
}

/// Serializable scalars of a [`GroundStateResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub power: f64,
    pub quotient_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub alpha: f64,
    pub beta: f64,
    pub amplitude_scale: f64,
    pub length_scale: f64,
    pub mass_q: f64,
    pub kinetic_q: f64,
    pub potential_q: f64,
    pub energy_real_line: f64,
    pub energy_unit_interval: f64,
    pub threshold_value: f64,
    pub threshold_value_hamiltonian: f64,
    pub el_residual: f64,
    pub gradient_norm: f64,
    pub sigma_truncation: f64,
    pub tail_estimate: f64,
    pub quotient_monotone: bool,
    pub warnings: Vec<String>,
}

impl GroundStateResult {
    pub fn quotient_monotone(&self) -> bool {
        self.quotient_history.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn summary(&self) -> GroundStateSummary {
        GroundStateSummary {
            power: self.power,
            quotient_value: self.quotient_value,
            iterations: self.iterations,
            converged: self.converged,
            alpha: self.alpha,
            beta: self.beta,
            amplitude_scale: self.amplitude_scale,
            length_scale: self.length_scale,
            mass_q: self.mass_q,
            kinetic_q: self.kinetic_q,
            potential_q: self.potential_q,
            energy_real_line: self.energy_real_line,
            energy_unit_interval: self.energy_unit_interval,
            threshold_value: self.threshold_value,
            threshold_value_hamiltonian: self.threshold_value_hamiltonian,
            el_residual: self.el_residual,
            gradient_norm: self.gradient_norm,
            sigma_truncation: self.sigma_truncation,
            tail_estimate: self.tail_estimate,
            quotient_monotone: self.quotient_monotone(),
            warnings: self.warnings.clone(),
        }
    }
}

/// Preconditioned gradient ascent on `log J` with Armijo backtracking. Each
/// trial point is renormalized to unit mass, which leaves `J` unchanged, and
/// to the configured gradient ratio, which fixes the dilation orbit.
pub fn optimize(init: &ComplexField, p: f64, cfg: &GroundStateConfig) -> Result<GroundStateResult> {
    cfg.validate()?;
    init.ensure_finite()?;
    let grid = Arc::clone(init.grid());
    let s = cfg.sigma_half_width;
    let q = Quotient::new(&grid, p, s, cfg.sigma_nodes_per_unit)?;
    let dv = q.dv();
    let mut warnings = Vec::new();
    if p <= 8.0 {
        warnings.push(format!("threshold values need p > 8; got p = {p}"));
    }

    let k_sq = grid.k_squared();
    let precondition = |v: &[Complex64]| -> Vec<Complex64> {
        // H^1 preconditioning keeps the Laplacian term from dictating the step.
        v.iter().zip(k_sq).map(|(z, &k2)| z / (1.0 + k2)).collect()
    };
    let start = {
        let m = init.mass();
        let ratio = 2.0 * kinetic(init)? / m;
        if !(m > 0.0 && ratio > 0.0) {
            return Err(Error::InvalidParameter(
                "initial guess must be nonzero and nonconstant".into(),
            ));
        }
        // Dilation changes the ratio by s^2; the retraction then only has to
        // absorb the lattice discrepancy.
        dilate(init, (cfg.gradient_ratio / ratio).sqrt())
    };
    let mut phi = retract(start.to_spectral(), k_sq, cfg.gradient_ratio, dv)?;
    let mut current = q.eval(&phi)?;
    let mut history = vec![current.log_j.exp()];
    let mut step = 0.1;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        let g = q.gradient(&phi, &current);
        // Ascend within the constraint set {M = 1, K/M = ratio}: remove the
        // normal directions phi and -Laplacian(phi).
        let lap: Vec<Complex64> = phi.iter().zip(k_sq).map(|(z, &k2)| z * k2).collect();
        let mut d = precondition(&g);
        let (p_phi, p_lap) = (precondition(&phi), precondition(&lap));
        let g_dot = [q.real_inner(&phi, &d), q.real_inner(&lap, &d)];
        project(&mut d, &g_dot, [&phi, &lap], [&p_phi, &p_lap], |a, b| {
            q.real_inner(a, b)
        });
        let slope = q.real_inner(&g, &d);
        if !(slope > 0.0 && slope.is_finite()) {
            converged = true;
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<Complex64> = phi.iter().zip(&d).map(|(f, x)| f + x * step).collect();
            let Ok(trial) = retract(trial, k_sq, cfg.gradient_ratio, dv) else {
                step *= 0.5;
                continue;
            };
            match q.eval(&trial) {
                Ok(e) if e.log_j >= current.log_j + ARMIJO * step * slope => {
                    accepted = Some((trial, e));
                    break;
                }
                Ok(_) | Err(Error::Overflow) => step *= 0.5,
                Err(e) => return Err(e),
            }
        }
        let Some((trial, e)) = accepted else {
            // No representable step increases the quotient: stationary to
            // working precision.
            converged = true;
            break;
        };
        iterations += 1;
        let gain = (e.log_j - current.log_j).exp_m1();
        phi = trial;
        current = e;
        history.push(current.log_j.exp());
        step *= 2.0;
        if gain < cfg.gain_tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        warnings.push(format!(
            "no convergence after {} iterations; reporting the best iterate",
            cfg.max_iterations
        ));
    }

    let e = &current;
    let alpha = (p + 8.0) * e.grad_sq / ((p - 4.0) * e.mass);
    let beta = 2.0 * (p + 2.0) * e.grad_sq / ((p - 4.0) * e.potential);
    let residual: Vec<Complex64> = phi
        .iter()
        .zip(&e.nonlinearity)
        .zip(grid.k_squared())
        .map(|((&f, &n), &k2)| -f * (k2 + alpha) + n * beta)
        .collect();
    let norm = |v: &[Complex64]| (v.iter().map(|z| z.norm_sqr()).sum::<f64>() * dv).sqrt();
    let el_residual = norm(&residual) / (alpha * e.mass.sqrt());
    let gradient_norm = norm(&q.gradient(&phi, e)) / e.mass.sqrt();

    // Q(x) = c phi(x / l) with l^2 = alpha, c^p = beta / alpha^2.
    let length_scale = alpha.sqrt();
    let amplitude_scale = (beta / (alpha * alpha)).powf(1.0 / p);
    let c2 = amplitude_scale * amplitude_scale;
    let mass_q = c2 * length_scale * e.mass;
    let kinetic_q = 0.5 * c2 * e.grad_sq / length_scale;
    let potential_scale = amplitude_scale.powf(p + 2.0) * length_scale.powi(3);
    let potential_q = potential_scale * e.potential;
    // sigma in [0, 1] for Q is sigma in [0, 1/alpha] for the profile.
    let unit = {
        let hi = 1.0 / alpha;
        let panels = hi.ceil().max(1.0) as usize;
        let nodes = composite_gauss_legendre(0.0, hi, panels, cfg.sigma_nodes_per_unit)?;
        let mut scratch = vec![Complex64::new(0.0, 0.0); phi.len()];
        SigmaOperator::new(&grid, p, &nodes).apply_with_potential(&phi, &mut scratch)?
    };
    let energy_real_line = kinetic_q - potential_q;
    let energy_unit_interval = kinetic_q - potential_scale * unit;
    let mass_power = mass_q.powf((p + 8.0) / (p - 8.0));
    let profile = ComplexField::from_spectral(&grid, phi);
    let tail_estimate = sigma_tail_estimate(&profile, p, s, cfg.sigma_nodes_per_unit)?;
    if tail_estimate > 1e-2 {
        warnings.push(format!(
            "sigma tail beyond |s| > {s} is estimated at {tail_estimate:.2e} of the quotient"
        ));
    }

    Ok(GroundStateResult {
        power: p,
        profile,
        quotient_value: e.log_j.exp(),
        quotient_history: history,
        iterations,
        converged,
        alpha,
        beta,
        amplitude_scale,
        length_scale,
        mass_q,
        kinetic_q,
        potential_q,
        energy_real_line,
        energy_unit_interval,
        threshold_value: mass_power * energy_real_line,
        threshold_value_hamiltonian: mass_power * (kinetic_q - potential_q / (p + 2.0)),
        el_residual,
        gradient_norm,
        sigma_truncation: s,
        tail_estimate,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: &Arc<Grid>, a: f64, w: f64) -> ComplexField {
        ComplexField::from_fn(grid, |x| Complex64::new(a * (-x[0] * x[0] / (w * w)).exp(), 0.0))
    }

    #[test]
    fn quotient_is_amplitude_and_phase_invariant() {
        let g = Grid::new(1, 256, 32.0).unwrap();
        let phi = gaussian(&g, 1.0, 1.0);
        let j = sgn_quotient(&phi, 10.0, 4.0, 8).unwrap();
        let scaled = phi.scale(Complex64::from_polar(3.7, 0.4));
        let js = sgn_quotient(&scaled, 10.0, 4.0, 8).unwrap();
        assert!(((js - j) / j).abs() < 1e-10);
    }

    #[test]
    fn rejects_zero_and_low_powers() {
        let g = Grid::new(1, 64, 16.0).unwrap();
        assert!(sgn_quotient(&ComplexField::zeros(&g), 10.0, 4.0, 8).is_err());
        assert!(sgn_quotient(&gaussian(&g, 1.0, 1.0), 4.0, 4.0, 8).is_err());
        assert!(sgn_quotient(&gaussian(&g, 1.0, 1.0), 10.0, 0.0, 8).is_err());
    }

    #[test]
    fn gradient_is_gauge_orthogonal() {
        let g = Grid::new(1, 128, 32.0).unwrap();
        let phi = ComplexField::from_fn(&g, |x| {
            Complex64::new((-x[0] * x[0]).exp(), 0.3 * x[0] * (-x[0] * x[0] / 2.0).exp())
        });
        let grad = sgn_gradient(&phi, 10.0, 4.0, 8).unwrap();
        let gauge = phi.scale(Complex64::i());
        let ip = grad.inner(&gauge).re / (grad.l2_norm() * gauge.l2_norm());
        assert!(ip.abs() < 1e-10, "{ip}");
    }
}
