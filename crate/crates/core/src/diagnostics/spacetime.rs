use serde::{Deserialize, Serialize};

use crate::dynamics::{SigmaOperator, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::lebesgue;

/// How the sigma variable enters a space-time norm of
/// `w(s, t) = e^{i s \Delta} u(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    /// `L^q_t L^inf_s L^r_x`, the supremum taken over the quadrature nodes.
    SupOverSigma,
    /// `L^q_{s,t} L^r_x`.
    LqInSigmaAndT,
}

/// Running values of `\int_0^{t_k} F(t) dt` (trapezoidal over checkpoints),
/// where `F(t)` is the sigma-reduced `||w(s, t)||_r^q`. The norm over
/// `[0, t_k]` is the `q`-th root of entry `k`.
pub fn spacetime_accumulation(trajectory: &Trajectory, q: f64, r: f64, mode: SigmaMode) -> Result<Vec<f64>> {
    if !(q >= 1.0 && q.is_finite()) || !(r >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "space-time norm needs finite q >= 1 and r >= 1, got q = {q}, r = {r}"
        )));
    }
    let grid = &trajectory.grid;
    let dv = grid.cell_volume();
    let op = SigmaOperator::new(grid, trajectory.params.power, &trajectory.params.sigma_nodes);
    let integrand: Vec<f64> = trajectory
        .checkpoints
        .iter()
        .map(|c| {
            let mut acc: f64 = 0.0;
            op.for_each_field(&c.field.to_spectral(), |node, w| {
                let v = lebesgue(w, r, dv).powf(q);
                match mode {
                    SigmaMode::SupOverSigma => acc = acc.max(v),
                    SigmaMode::LqInSigmaAndT => acc += node.weight * v,
                }
            });
            acc
        })
        .collect();
    let mut out = Vec::with_capacity(integrand.len());
    let mut total = 0.0;
    for k in 0..integrand.len() {
        if k > 0 {
            let dt = (trajectory.checkpoints[k].time - trajectory.checkpoints[k - 1].time).abs();
            total += 0.5 * dt * (integrand[k] + integrand[k - 1]);
        }
        out.push(total);
    }
    Ok(out)
}

/// `||w||` in the requested mixed norm over the trajectory's checkpoint
/// span.
pub fn spacetime_norm(trajectory: &Trajectory, q: f64, r: f64, mode: SigmaMode) -> Result<f64> {
    let acc = spacetime_accumulation(trajectory, q, r, mode)?;
    Ok(acc.last().copied().unwrap_or(0.0).powf(1.0 / q))
}
