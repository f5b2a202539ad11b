use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::exponents::exponent_report;
use crate::spectral::{free_propagate, norm, ComplexField, NormSpec};

/// Norms in which scattering can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScatteringNorm {
    L2,
    /// `H^{s_c}`; needs `s_c >= 0`.
    CriticalSobolev,
    /// `|| |x|^gamma . ||_2`; needs `gamma` in `(0, 1]`.
    CriticalWeight,
    Sigma,
}

impl ScatteringNorm {
    fn spec(self, d: usize, p: f64) -> Result<NormSpec> {
        let rep = exponent_report(d, p);
        match self {
            ScatteringNorm::L2 => Ok(NormSpec::Lr { r: 2.0 }),
            ScatteringNorm::Sigma => Ok(NormSpec::Sigma),
            ScatteringNorm::CriticalSobolev if rep.s_c >= 0.0 => Ok(NormSpec::SobolevHs { s: rep.s_c }),
            ScatteringNorm::CriticalSobolev => Err(Error::UndefinedNorm(format!(
                "s_c = {} is negative for d = {d}, p = {p}",
                rep.s_c
            ))),
            ScatteringNorm::CriticalWeight if rep.gamma > 0.0 && rep.gamma <= 1.0 => {
                Ok(NormSpec::WeightedL2 { gamma: rep.gamma })
            }
            ScatteringNorm::CriticalWeight => Err(Error::UndefinedNorm(format!(
                "gamma = {} lies outside (0, 1] for d = {d}, p = {p}",
                rep.gamma
            ))),
        }
    }
}

/// Cauchy differences of the profile `v(t_k) = e^{-i t_k \Delta} u(t_k)` in
/// one norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchySeries {
    pub norm: ScatteringNorm,
    /// Norm of the field at the first checkpoint.
    pub data_norm: f64,
    /// `||v(t_{k+1}) - v(t_k)||`, one entry per consecutive pair.
    pub differences: Vec<f64>,
}

impl CauchySeries {
    /// Whether the differences of pairs starting at or after `t_start` never
    /// increase. `times` are the checkpoint times the series was built from.
    pub fn monotone_after(&self, times: &[f64], t_start: f64) -> bool {
        let tail: Vec<f64> = self
            .differences
            .iter()
            .zip(times)
            .filter(|(_, &t)| t.abs() >= t_start)
            .map(|(d, _)| *d)
            .collect();
        tail.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn last_relative(&self) -> f64 {
        let last = self.differences.last().copied().unwrap_or(0.0);
        if self.data_norm > 0.0 {
            last / self.data_norm
        } else {
            last
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringReport {
    pub times: Vec<f64>,
    pub series: Vec<CauchySeries>,
    /// `v(t_last)`, the candidate asymptotic state.
    pub scattering_state: ComplexField,
}

/// Pulls every checkpoint back by the free flow and measures consecutive
/// differences in each requested norm.
pub fn scattering_profile(trajectory: &Trajectory, norms: &[ScatteringNorm]) -> Result<ScatteringReport> {
    if trajectory.checkpoints.len() < 4 {
        return Err(Error::InvalidWindow(format!(
            "scattering profile needs at least 4 checkpoints, got {}",
            trajectory.checkpoints.len()
        )));
    }
    let (d, p) = (trajectory.params.dimension, trajectory.params.power);
    let specs = norms
        .iter()
        .map(|n| n.spec(d, p).map(|s| (*n, s)))
        .collect::<Result<Vec<_>>>()?;
    let profiles = trajectory
        .checkpoints
        .iter()
        .map(|c| free_propagate(&c.field, -c.time))
        .collect::<Result<Vec<_>>>()?;
    let series = specs
        .into_iter()
        .map(|(which, spec)| {
            let data_norm = norm(&trajectory.checkpoints[0].field, spec)?;
            let differences = profiles
                .windows(2)
                .map(|w| norm(&w[1].sub(&w[0]), spec))
                .collect::<Result<Vec<_>>>()?;
            Ok(CauchySeries {
                norm: which,
                data_norm,
                differences,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScatteringReport {
        times: trajectory.times(),
        series,
        scattering_state: profiles.last().cloned().expect("at least four checkpoints"),
    })
}
