use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nonlinearity::InteractionRhs;
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::spectral::{boundary_mass_fraction, propagate_spectral, ComplexField, Grid, DEFAULT_BOUNDARY_THRESHOLD};

/// How often (in accepted steps) the boundary band is inspected between
/// checkpoints.
const BOUNDARY_CHECK_INTERVAL: usize = 16;

/// Time-stepping controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepperConfig {
    pub dt: f64,
    pub adaptive: bool,
    /// Local error target per step (adaptive mode), relative to `1 + ||v||_2`.
    pub tol: f64,
    pub max_dt: f64,
    pub min_dt: f64,
    pub blowup_gradient_factor: f64,
    /// Largest tolerated mass fraction in the outer band of the box.
    pub boundary_threshold: f64,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt: 1e-2,
            adaptive: false,
            tol: 1e-10,
            max_dt: 0.1,
            min_dt: 1e-9,
            blowup_gradient_factor: 1e3,
            boundary_threshold: DEFAULT_BOUNDARY_THRESHOLD,
        }
    }
}

impl StepperConfig {
    pub fn fixed(dt: f64) -> Self {
        StepperConfig {
            dt,
            max_dt: dt.max(StepperConfig::default().max_dt),
            min_dt: dt.min(StepperConfig::default().min_dt),
            ..Default::default()
        }
    }

    pub fn adaptive(dt: f64, tol: f64) -> Self {
        StepperConfig {
            adaptive: true,
            tol,
            ..StepperConfig::fixed(dt)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            problems.push(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.min_dt > 0.0 && self.min_dt <= self.dt && self.dt <= self.max_dt) {
            problems.push(format!(
                "need 0 < min_dt <= dt <= max_dt, got {} / {} / {}",
                self.min_dt, self.dt, self.max_dt
            ));
        }
        if !(self.tol > 0.0) {
            problems.push(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.blowup_gradient_factor > 1.0) {
            problems.push(format!(
                "blowup_gradient_factor must exceed 1, got {}",
                self.blowup_gradient_factor
            ));
        }
        if !(self.boundary_threshold > 0.0) {
            problems.push(format!(
                "boundary_threshold must be positive, got {}",
                self.boundary_threshold
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(problems.join("; ")))
        }
    }
}

/// Why a run was declared singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupReason {
    GradientGrowth,
    StepUnderflow,
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BlowupDetected { time: f64, reason: BlowupReason },
    InvalidatedBoundaryMass { time: f64, fraction: f64 },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, RunStatus::BlowupDetected { .. })
    }
}

/// A stored solution snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub time: f64,
    pub field: ComplexField,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Magnitude of the shortest accepted step.
    pub smallest_step: Option<f64>,
}

impl StepStats {
    fn accept(&mut self, h: f64) {
        self.accepted += 1;
        let h = h.abs();
        self.smallest_step = Some(self.smallest_step.map_or(h, |s| s.min(h)));
    }
}

/// Result of [`evolve`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: ModelParams,
    pub grid: Arc<Grid>,
    /// Snapshots at the requested times reached before the run stopped.
    pub checkpoints: Vec<Checkpoint>,
    pub status: RunStatus,
    /// The solution at the time the run stopped.
    pub final_state: Checkpoint,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.checkpoints.iter().map(|c| c.time).collect()
    }
}

enum Halt {
    Blowup(BlowupReason),
    Boundary(f64),
}

struct Integrator<'a> {
    rhs: InteractionRhs,
    grid: &'a Grid,
    cfg: &'a StepperConfig,
    grad0: f64,
}

impl Integrator<'_> {
    fn rk4(&self, t: f64, v: &[Complex64], h: f64, k1: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = v.len();
        let axpy = |a: f64, k: &[Complex64]| -> Vec<Complex64> { v.iter().zip(k).map(|(&x, &y)| x + y * a).collect() };
        let mut k2 = vec![Complex64::new(0.0, 0.0); n];
        self.rhs.eval(t + 0.5 * h, &axpy(0.5 * h, k1), &mut k2)?;
        let mut k3 = vec![Complex64::new(0.0, 0.0); n];
        self.rhs.eval(t + 0.5 * h, &axpy(0.5 * h, &k2), &mut k3)?;
        let mut k4 = vec![Complex64::new(0.0, 0.0); n];
        self.rhs.eval(t + h, &axpy(h, &k3), &mut k4)?;
        let sixth = h / 6.0;
        let out: Vec<Complex64> = (0..n)
            .map(|i| v[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * sixth)
            .collect();
        if out.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(out)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn first_stage(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut k1 = vec![Complex64::new(0.0, 0.0); v.len()];
        self.rhs.eval(t, v, &mut k1)?;
        Ok(k1)
    }

    fn l2(&self, coeffs: &[Complex64]) -> f64 {
        (coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    fn gradient_norm(&self, v_hat: &[Complex64]) -> f64 {
        let s: f64 = v_hat
            .iter()
            .zip(self.grid.k_squared())
            .map(|(z, &k2)| z.norm_sqr() * k2)
            .sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    fn gradient_blew_up(&self, v_hat: &[Complex64]) -> bool {
        let g = self.gradient_norm(v_hat);
        !g.is_finite() || (self.grad0 > 0.0 && g > self.cfg.blowup_gradient_factor * self.grad0)
    }
}

fn physical(grid: &Arc<Grid>, t: f64, v_hat: &[Complex64]) -> ComplexField {
    let mut u_hat = v_hat.to_vec();
    propagate_spectral(grid.k_squared(), &mut u_hat, t);
    ComplexField::from_spectral(grid, u_hat)
}

/// Solves the equation from `u(0) = u0` up to `t_final` (which may be
/// negative) with RK4 in the interaction picture `v = e^{-it\Delta} u`,
/// storing `u` at each of `checkpoint_times`.
///
/// Checkpoint times must lie between 0 and `t_final` and be strictly
/// monotone in the direction of integration. In fixed mode the steps between
/// consecutive stops are uniform and no longer than `dt`.
pub fn evolve(
    u0: &ComplexField,
    params: &ModelParams,
    cfg: &StepperConfig,
    t_final: f64,
    checkpoint_times: &[f64],
) -> Result<Trajectory> {
    params.validate()?;
    cfg.validate()?;
    u0.ensure_finite()?;
    let grid = Arc::clone(u0.grid());
    if grid.dimension() != params.dimension {
        return Err(Error::InvalidParameter(format!(
            "grid dimension {} does not match model dimension {}",
            grid.dimension(),
            params.dimension
        )));
    }
    if !t_final.is_finite() {
        return Err(Error::InvalidParameter("t_final must be finite".into()));
    }
    let dir = if t_final < 0.0 { -1.0 } else { 1.0 };
    let (lo, hi) = (t_final.min(0.0), t_final.max(0.0));
    if let Some(&bad) = checkpoint_times.iter().find(|&&t| !(t >= lo && t <= hi)) {
        return Err(Error::InvalidParameter(format!(
            "checkpoint time {bad} outside [{lo}, {hi}]"
        )));
    }
    if checkpoint_times.windows(2).any(|w| (w[1] - w[0]) * dir <= 0.0) {
        return Err(Error::InvalidParameter(
            "checkpoint times must be strictly monotone in the direction of integration".into(),
        ));
    }

    let mut stops: Vec<(f64, bool)> = checkpoint_times.iter().map(|&t| (t, true)).collect();
    if stops.last().map(|s| s.0) != Some(t_final) {
        stops.push((t_final, false));
    }

    let integ = Integrator {
        rhs: InteractionRhs::new(&grid, params),
        grid: &grid,
        cfg,
        grad0: 0.0,
    };
    let mut v = u0.to_spectral();
    let integ = Integrator {
        grad0: integ.gradient_norm(&v),
        ..integ
    };

    let mut t = 0.0;
    let mut checkpoints = Vec::new();
    let mut stats = StepStats::default();
    let mut h = cfg.dt;
    let mut since_boundary_check = 0usize;
    let mut halt: Option<(f64, Halt)> = None;

    'stops: for &(target, store) in &stops {
        while t != target {
            // One accepted step (or a halt).
            if cfg.adaptive {
                let remaining = (target - t).abs();
                // A step within a hair of the stop lands on it exactly, so no
                // sliver step is left over.
                let (step, last) = if h >= remaining || remaining - h < 1e-6 * h {
                    (remaining, true)
                } else {
                    (h, false)
                };
                let hs = dir * step;
                let k1 = integ.first_stage(t, &v);
                let attempt = k1.and_then(|k1| {
                    let full = integ.rk4(t, &v, hs, &k1)?;
                    let mid = integ.rk4(t, &v, 0.5 * hs, &k1)?;
                    let k1m = integ.first_stage(t + 0.5 * hs, &mid)?;
                    let half = integ.rk4(t + 0.5 * hs, &mid, 0.5 * hs, &k1m)?;
                    Ok((full, half))
                });
                match attempt {
                    Ok((full, half)) => {
                        let diff: Vec<Complex64> = full.iter().zip(&half).map(|(a, b)| a - b).collect();
                        let err = integ.l2(&diff);
                        let scale = cfg.tol * (1.0 + integ.l2(&half));
                        if err <= scale {
                            v = half;
                            t = if last { target } else { t + hs };
                            stats.accept(hs);
                            if err < scale / 32.0 {
                                h = (2.0 * h).min(cfg.max_dt);
                            }
                        } else {
                            stats.rejected += 1;
                            h = 0.5 * step;
                        }
                    }
                    Err(Error::Overflow) | Err(Error::NonFinite) => {
                        stats.rejected += 1;
                        h = 0.5 * step;
                    }
                    Err(e) => return Err(e),
                }
                if h < cfg.min_dt {
                    halt = Some((t, Halt::Blowup(BlowupReason::StepUnderflow)));
                    break 'stops;
                }
            } else {
                let remaining = target - t;
                let n = ((remaining.abs() / cfg.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                let hs = remaining / n as f64;
                let t0 = t;
                for k in 1..=n {
                    let k1 = integ.first_stage(t, &v)?;
                    v = integ.rk4(t, &v, hs, &k1)?;
                    t = if k == n { target } else { t0 + k as f64 * hs };
                    stats.accept(hs);
                    if let Some(hl) = after_step(&integ, &grid, t, &v, &mut since_boundary_check) {
                        halt = Some((t, hl));
                        break 'stops;
                    }
                }
                continue;
            }
            if let Some(hl) = after_step(&integ, &grid, t, &v, &mut since_boundary_check) {
                halt = Some((t, hl));
                break 'stops;
            }
        }
        if store {
            let u = physical(&grid, t, &v);
            let fraction = boundary_mass_fraction(&u);
            let over = fraction > cfg.boundary_threshold;
            checkpoints.push(Checkpoint { time: t, field: u });
            if over {
                halt = Some((t, Halt::Boundary(fraction)));
                break;
            }
        }
    }

    let status = match halt {
        None => RunStatus::Completed,
        Some((time, Halt::Blowup(reason))) => RunStatus::BlowupDetected { time, reason },
        Some((time, Halt::Boundary(fraction))) => RunStatus::InvalidatedBoundaryMass { time, fraction },
    };
    Ok(Trajectory {
        params: params.clone(),
        final_state: Checkpoint {
            time: t,
            field: physical(&grid, t, &v),
        },
        grid,
        checkpoints,
        status,
        stats,
    })
}

fn after_step(
    integ: &Integrator<'_>,
    grid: &Arc<Grid>,
    t: f64,
    v: &[Complex64],
    since_boundary_check: &mut usize,
) -> Option<Halt> {
    if integ.gradient_blew_up(v) {
        return Some(Halt::Blowup(BlowupReason::GradientGrowth));
    }
    *since_boundary_check += 1;
    if *since_boundary_check >= BOUNDARY_CHECK_INTERVAL {
        *since_boundary_check = 0;
        let fraction = boundary_mass_fraction(&physical(grid, t, v));
        if fraction > integ.cfg.boundary_threshold {
            return Some(Halt::Boundary(fraction));
        }
    }
    None
}
