use serde::{Deserialize, Serialize};

use super::series::record_field;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{free_propagate, ComplexField};

/// `e^{-i\Delta} conj(u)`, the map under which the equation is reversible.
pub fn reversal_map(u: &ComplexField) -> Result<ComplexField> {
    free_propagate(&u.conj(), -1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReversalReport {
    pub times: Vec<f64>,
    /// `||v(t) - e^{-i\Delta} conj(u(-t))|| / ||e^{-i\Delta} conj(u(-t))||`
    pub field_deviation: Vec<f64>,
    /// Relative mismatch of `kinetic - nl_potential` between `v(t)` and `u(-t)`.
    pub energy_deviation: Vec<f64>,
    pub max_field_deviation: f64,
    pub max_energy_deviation: f64,
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Compares a forward run of `v_0 = e^{-i\Delta} conj(u_0)` with a backward
/// run of `u` checkpoint by checkpoint (forward time `t` against backward
/// time `-t`).
pub fn time_reversal_check(forward: &Trajectory, backward: &Trajectory) -> Result<ReversalReport> {
    let (f, b) = (&forward.checkpoints, &backward.checkpoints);
    if f.len() != b.len() {
        return Err(Error::ScheduleMismatch(format!(
            "{} forward checkpoints against {} backward",
            f.len(),
            b.len()
        )));
    }
    if let Some((x, y)) = f
        .iter()
        .zip(b)
        .find(|(x, y)| (x.time + y.time).abs() > 1e-12 * x.time.abs().max(1.0))
    {
        return Err(Error::ScheduleMismatch(format!(
            "forward time {} is not the reflection of backward time {}",
            x.time, y.time
        )));
    }
    let mut field_deviation = Vec::with_capacity(f.len());
    let mut energy_deviation = Vec::with_capacity(f.len());
    for (x, y) in f.iter().zip(b) {
        let mapped = reversal_map(&y.field)?;
        field_deviation.push(relative(x.field.sub(&mapped).l2_norm(), mapped.l2_norm()));
        let ev = record_field(&x.field, x.time, &forward.params)?.energy_focusing_chl;
        let eu = record_field(&y.field, y.time, &backward.params)?.energy_focusing_chl;
        energy_deviation.push(relative((ev - eu).abs(), eu.abs()));
    }
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(ReversalReport {
        times: f.iter().map(|c| c.time).collect(),
        max_field_deviation: max(&field_deviation),
        max_energy_deviation: max(&energy_deviation),
        field_deviation,
        energy_deviation,
    })
}
