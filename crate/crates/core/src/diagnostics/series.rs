use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{abs_pow, ModelParams, SigmaOperator, Trajectory};
use crate::error::Result;
use crate::spectral::{
    boundary_mass_fraction, free_propagate, galilean_apply, ComplexField, DEFAULT_BOUNDARY_THRESHOLD,
};

/// CSV column names, in order.
pub const COLUMNS: [&str; 12] = [
    "t",
    "mass",
    "kinetic",
    "nl_potential",
    "energy_defocusing",
    "energy_focusing_CHL",
    "Ju_norm",
    "pce",
    "w_norm_p2",
    "w1_norm_p2",
    "sigma_weighted_potential",
    "boundary_mass_fraction",
];

/// Monitored quantities at one time.
///
/// `nl_potential` is the raw `\int_0^1 \int |w|^{p+2}` with
/// `w = e^{i s \Delta} u`. The two energies differ in convention:
/// `energy_defocusing = kinetic + nl_potential/(p+2)` is the conserved energy
/// of the defocusing equation, `energy_focusing_chl = kinetic - nl_potential`
/// is the functional used by the focusing ground-state threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub kinetic: f64,
    pub nl_potential: f64,
    pub energy_defocusing: f64,
    #[serde(rename = "energy_focusing_CHL")]
    pub energy_focusing_chl: f64,
    #[serde(rename = "Ju_norm")]
    pub ju_norm: f64,
    /// `Ju_norm^2 + weight * 8 t^2/(p+2) * nl_potential`
    pub pce: f64,
    /// `(nl_potential)^{1/(p+2)}`
    pub w_norm_p2: f64,
    /// `|| e^{i \Delta} u ||_{p+2}^{p+2}`
    pub w1_norm_p2: f64,
    /// `\int_0^1 s \int |w|^{p+2}`
    pub sigma_weighted_potential: f64,
    pub boundary_mass_fraction: f64,
}

impl DiagnosticsRecord {
    pub fn values(&self) -> [f64; 12] {
        [
            self.t,
            self.mass,
            self.kinetic,
            self.nl_potential,
            self.energy_defocusing,
            self.energy_focusing_chl,
            self.ju_norm,
            self.pce,
            self.w_norm_p2,
            self.w1_norm_p2,
            self.sigma_weighted_potential,
            self.boundary_mass_fraction,
        ]
    }

    pub fn from_values(v: [f64; 12]) -> Self {
        DiagnosticsRecord {
            t: v[0],
            mass: v[1],
            kinetic: v[2],
            nl_potential: v[3],
            energy_defocusing: v[4],
            energy_focusing_chl: v[5],
            ju_norm: v[6],
            pce: v[7],
            w_norm_p2: v[8],
            w1_norm_p2: v[9],
            sigma_weighted_potential: v[10],
            boundary_mass_fraction: v[11],
        }
    }
}

/// One [`DiagnosticsRecord`] per checkpoint, plus the model data needed to
/// interpret them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsTimeSeries {
    pub dimension: usize,
    pub power: f64,
    /// Signed coefficient `c` of `i u_t + \Delta u = c N(u)`.
    pub coefficient: f64,
    pub nonlinearity_weight: f64,
    pub boundary_threshold: f64,
    pub records: Vec<DiagnosticsRecord>,
}

impl DiagnosticsTimeSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn column(&self, f: impl Fn(&DiagnosticsRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }

    /// Indices of records whose boundary mass fraction exceeds the threshold.
    pub fn flagged(&self) -> Vec<usize> {
        self.records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.boundary_mass_fraction > self.boundary_threshold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Every `stride`-th record, starting with the first.
    pub fn subsample(&self, stride: usize) -> Self {
        DiagnosticsTimeSeries {
            records: self.records.iter().step_by(stride.max(1)).copied().collect(),
            ..self.clone()
        }
    }

    /// Largest relative deviation of a column from its first value.
    pub fn max_relative_drift(&self, f: impl Fn(&DiagnosticsRecord) -> f64) -> f64 {
        let Some(first) = self.records.first() else {
            return 0.0;
        };
        let base = f(first);
        self.records
            .iter()
            .map(|r| {
                let dv = (f(r) - base).abs();
                if base != 0.0 {
                    dv / base.abs()
                } else {
                    dv
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Evaluates every monitored quantity of one field.
pub fn record_field(u: &ComplexField, t: f64, params: &ModelParams) -> Result<DiagnosticsRecord> {
    params.validate()?;
    u.ensure_finite()?;
    let grid = u.grid();
    let dv = grid.cell_volume();
    let p = params.power;
    let coeffs = u.to_spectral();

    let mass = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() * dv;
    let kinetic = 0.5
        * coeffs
            .iter()
            .zip(grid.k_squared())
            .map(|(z, &k2)| z.norm_sqr() * k2)
            .sum::<f64>()
        * dv;

    let op = SigmaOperator::new(grid, p, &params.sigma_nodes);
    let mut potential = 0.0;
    let mut weighted = 0.0;
    op.for_each_field(&coeffs, |q, w| {
        let s = lp_integral(w, p + 2.0, dv);
        potential += q.weight * s;
        weighted += q.weight * q.sigma * s;
    });

    let w1 = free_propagate(u, 1.0)?;
    let w1_norm_p2 = lp_integral(w1.values(), p + 2.0, dv);

    let ju_sq: f64 = galilean_apply(u, t)?.iter().map(|c| c.mass()).sum();

    Ok(DiagnosticsRecord {
        t,
        mass,
        kinetic,
        nl_potential: potential,
        energy_defocusing: kinetic + potential / (p + 2.0),
        energy_focusing_chl: kinetic - potential,
        ju_norm: ju_sq.sqrt(),
        pce: ju_sq + params.nonlinearity_weight * 8.0 * t * t / (p + 2.0) * potential,
        w_norm_p2: potential.powf(1.0 / (p + 2.0)),
        w1_norm_p2,
        sigma_weighted_potential: weighted,
        boundary_mass_fraction: boundary_mass_fraction(u),
    })
}

/// `\int |z|^r dx` on the lattice.
pub(crate) fn lp_integral(values: &[Complex64], r: f64, dv: f64) -> f64 {
    values.iter().map(|z| abs_pow(z.norm_sqr(), r)).sum::<f64>() * dv
}

/// Diagnostics at every checkpoint of a trajectory, with the sigma rule of
/// `params`.
pub fn record(trajectory: &Trajectory, params: &ModelParams) -> Result<DiagnosticsTimeSeries> {
    let records = trajectory
        .checkpoints
        .iter()
        .map(|c| record_field(&c.field, c.time, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsTimeSeries {
        dimension: params.dimension,
        power: params.power,
        coefficient: params.coefficient(),
        nonlinearity_weight: params.nonlinearity_weight,
        boundary_threshold: DEFAULT_BOUNDARY_THRESHOLD,
        records,
    })
}
