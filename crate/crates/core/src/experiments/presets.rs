//! Default parameters and pipelines of the presets.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::{
    AnalysisConfig, Checkpoints, DichotomyConfig, ExponentsSection, GridConfig, GroundStateSection, InitialData,
    ModelConfig, Preset, RunConfig,
};
use super::output::{float, read_checkpoint_on};
use super::Ctx;
use crate::diagnostics::{
    compare_variants, decay_fit, nonscattering_probe, record, reversal_map, scattering_profile, spacetime_accumulation,
    time_reversal_check, DecayQuantity, DiagnosticsTimeSeries, ScatteringNorm, SigmaMode,
};
use crate::dynamics::{evolve, ModelParams, RunStatus, Sign, StepperConfig, Trajectory};
use crate::error::{Error, Result};
use crate::exponents::{admissible, emitted_pairs, exponent_report, one_d_critical_exponents, scaling_residuals};
use crate::ground_state::{optimize, sgn_gradient, sgn_quotient, GroundStateResult};
use crate::spectral::{free_propagate, norm, ComplexField, Grid, NormSpec};

/// Check names of a preset, with whether each is hard-fail by default.
pub fn check_names(preset: Preset) -> &'static [(&'static str, bool)] {
    const CONSERVATION: [(&str, bool); 3] = [
        ("run_completed", true),
        ("mass_conservation", true),
        ("energy_conservation", true),
    ];
    match preset {
        Preset::FreeSanity => &[
            ("run_completed", true),
            ("mass_constant", true),
            ("kinetic_constant", true),
            ("ju_constant", true),
            ("matches_free_propagator", true),
        ],
        Preset::SmallDataScatterIntercritical | Preset::SmallDataScatterSubcritical => &[
            CONSERVATION[0],
            CONSERVATION[1],
            CONSERVATION[2],
            ("l2_monotone", true),
            ("l2_final", true),
            ("critical_monotone", true),
            ("critical_final", true),
        ],
        Preset::LargeDataScatter => &[
            CONSERVATION[0],
            CONSERVATION[1],
            CONSERVATION[2],
            ("l2_cauchy_decreasing", true),
            ("sigma_cauchy_decreasing", true),
            ("spacetime_norm_finite", false),
        ],
        Preset::PceCheck => &[
            CONSERVATION[0],
            CONSERVATION[1],
            CONSERVATION[2],
            ("pce_residual", true),
            ("pce_separation", true),
            ("pce_refinement", true),
        ],
        Preset::DecayRates => &[
            CONSERVATION[0],
            CONSERVATION[1],
            CONSERVATION[2],
            ("ju_slope", true),
            ("w_slope", true),
        ],
        Preset::Nonscattering => &[
            CONSERVATION[0],
            CONSERVATION[1],
            CONSERVATION[2],
            ("probe_exponent", true),
            ("overlap_increasing", true),
        ],
        Preset::TimeReversal => &[
            ("forward_completed", true),
            ("backward_completed", true),
            ("field_deviation", true),
            ("energy_deviation", true),
        ],
        Preset::BlowupDichotomy => &[
            ("low_completes_both_directions", true),
            ("low_gradient_bounded", true),
            ("high_blows_up_both_directions", true),
            ("bracket_ratio", true),
        ],
        Preset::GroundState => &[
            ("converged", true),
            ("quotient_monotone", true),
            ("el_residual", true),
            ("gradient_fd", true),
            ("init_agreement", false),
        ],
        Preset::ExponentsTable => &[("pairs_admissible", true), ("scaling_relations", true)],
    }
}

fn gaussian(amplitude: f64, width: f64) -> InitialData {
    InitialData::Gaussian {
        amplitude,
        width,
        center: Vec::new(),
        velocity: Vec::new(),
        critical_norm: None,
    }
}

fn model(power: f64, sign: Sign) -> ModelConfig {
    ModelConfig {
        power,
        sign,
        ..ModelConfig::default()
    }
}

/// The full config of a preset before user overrides. `output_dir` is left
/// empty; every config must set it.
pub fn preset_defaults(preset: Preset) -> RunConfig {
    let mut c = RunConfig {
        preset,
        output_dir: Default::default(),
        rng_seed: 0,
        t_final: 10.0,
        model: ModelConfig::default(),
        grid: GridConfig::default(),
        stepper: StepperConfig::fixed(0.01),
        initial_data: gaussian(1.0, 2.0),
        checkpoints: Checkpoints::every(0.5),
        analysis: AnalysisConfig::default(),
        dichotomy: DichotomyConfig::default(),
        ground_state: GroundStateSection::default(),
        exponents: ExponentsSection::default(),
        hard_fail: check_names(preset)
            .iter()
            .filter(|(_, hard)| *hard)
            .map(|(n, _)| n.to_string())
            .collect(),
    };
    let decay_grid = GridConfig {
        points_per_axis: 4096,
        box_length: 1024.0,
    };
    match preset {
        Preset::FreeSanity => {
            c.model.nonlinearity_weight = 0.0;
            c.stepper = StepperConfig::fixed(0.05);
            c.initial_data = InitialData::Gaussian {
                amplitude: 0.5,
                width: 4.0,
                center: Vec::new(),
                velocity: vec![0.5],
                critical_norm: None,
            };
        }
        Preset::SmallDataScatterIntercritical | Preset::SmallDataScatterSubcritical => {
            let p = if preset == Preset::SmallDataScatterIntercritical {
                5.0
            } else {
                3.0
            };
            c.model = model(p, Sign::Defocusing);
            c.stepper = StepperConfig::fixed(0.02);
            c.initial_data = InitialData::Gaussian {
                amplitude: 1.0,
                width: 8.0,
                center: Vec::new(),
                velocity: Vec::new(),
                critical_norm: Some(0.1),
            };
            c.t_final = 50.0;
            c.checkpoints = Checkpoints::every(1.0);
            c.analysis.transient = 5.0;
        }
        Preset::LargeDataScatter | Preset::DecayRates => {
            c.grid = decay_grid;
            c.initial_data = gaussian(1.0, 6.0);
            c.t_final = 50.0;
            c.checkpoints = Checkpoints::every(0.5);
            c.analysis.window = [5.0, 50.0];
            c.analysis.transient = 5.0;
        }
        Preset::PceCheck => {
            c.t_final = 4.5;
            c.checkpoints = Checkpoints::every(0.025);
            c.analysis.window = [1.0, 4.0];
        }
        Preset::Nonscattering => {
            c.model = model(1.0, Sign::Defocusing);
            c.grid.box_length = 512.0;
            c.stepper = StepperConfig::fixed(0.05);
            c.initial_data = gaussian(0.01, 6.0);
            c.t_final = 100.0;
            c.checkpoints = Checkpoints::every(1.0);
            c.analysis.window = [10.0, 100.0];
            c.analysis.probe = Some(gaussian(1.0, 6.0));
        }
        Preset::TimeReversal => {
            c.model = model(10.0, Sign::Focusing);
            c.stepper = StepperConfig::fixed(1e-3);
            c.initial_data = gaussian(1.0, 1.0);
            c.t_final = 1.0;
            c.checkpoints = Checkpoints::every(0.05);
        }
        Preset::BlowupDichotomy => {
            c.model = model(10.0, Sign::Focusing);
            c.grid = GridConfig {
                points_per_axis: 4096,
                box_length: 512.0,
            };
            c.stepper = StepperConfig {
                blowup_gradient_factor: 10.0,
                boundary_threshold: 1e-4,
                ..StepperConfig::adaptive(1e-3, 1e-9)
            };
            c.initial_data = gaussian(1.0, 1.0);
            c.t_final = 20.0;
            c.checkpoints = Checkpoints::every(0.5);
        }
        Preset::GroundState => {
            c.model = model(10.0, Sign::Focusing);
            c.grid = GridConfig {
                points_per_axis: 512,
                box_length: 64.0,
            };
            c.ground_state.initializations = vec![
                gaussian(1.0, 1.0),
                InitialData::Sech {
                    amplitude: 1.0,
                    width: 2.0 / 3.0,
                    center: Vec::new(),
                    velocity: Vec::new(),
                },
            ];
        }
        Preset::ExponentsTable => {}
    }
    c
}

fn axis_value(v: &[f64], axis: usize) -> f64 {
    v.get(axis).copied().unwrap_or(0.0)
}

fn shaped(grid: &Arc<Grid>, center: &[f64], velocity: &[f64], f: impl Fn(f64) -> f64) -> ComplexField {
    ComplexField::from_fn(grid, |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for (a, &xa) in x.iter().enumerate() {
            let dx = xa - axis_value(center, a);
            r2 += dx * dx;
            phase += axis_value(velocity, a) * xa;
        }
        Complex64::from_polar(f(r2.sqrt()), phase)
    })
}

/// Samples initial data on `grid`. `power` selects the critical space used
/// by `critical_norm`.
pub fn initial_field(data: &InitialData, grid: &Arc<Grid>, power: f64) -> Result<ComplexField> {
    match data {
        InitialData::Gaussian {
            amplitude,
            width,
            center,
            velocity,
            critical_norm,
        } => {
            let u = shaped(grid, center, velocity, |r| amplitude * (-(r / width).powi(2)).exp());
            match critical_norm {
                None => Ok(u),
                Some(target) => {
                    let rep = exponent_report(grid.dimension(), power);
                    let spec = if rep.s_c >= 0.0 {
                        NormSpec::SobolevHs { s: rep.s_c }
                    } else {
                        NormSpec::WeightedL2 { gamma: rep.gamma }
                    };
                    let current = norm(&u, spec)?;
                    if !(current > 0.0) {
                        return Err(Error::InvalidParameter("cannot rescale vanishing data".into()));
                    }
                    Ok(u.scale(Complex64::new(target / current, 0.0)))
                }
            }
        }
        InitialData::Sech {
            amplitude,
            width,
            center,
            velocity,
        } => Ok(shaped(grid, center, velocity, |r| amplitude / (r / width).cosh())),
        InitialData::PlaneWave { amplitude, mode } => {
            let k: Vec<f64> = mode.iter().map(|&m| 2.0 * PI * m as f64 / grid.box_length()).collect();
            Ok(ComplexField::from_fn(grid, |x| {
                let phase: f64 = x.iter().zip(&k).map(|(a, b)| a * b).sum();
                Complex64::from_polar(*amplitude, phase)
            }))
        }
        InitialData::CustomFile { path } => read_checkpoint_on(path, grid),
    }
}

fn status_label(status: &RunStatus) -> String {
    match status {
        RunStatus::Completed => "completed".into(),
        RunStatus::BlowupDetected { time, reason } => format!("blowup at t = {time} ({reason:?})"),
        RunStatus::InvalidatedBoundaryMass { time, fraction } => {
            format!("invalidated at t = {time}: boundary mass fraction {fraction:.3e}")
        }
    }
}

fn gradient_norm(u: &ComplexField) -> f64 {
    let grid = u.grid();
    let sum: f64 = u
        .to_spectral()
        .iter()
        .zip(grid.k_squared())
        .map(|(z, k2)| z.norm_sqr() * k2)
        .sum();
    (sum * grid.cell_volume()).sqrt()
}

pub(super) struct Setup {
    pub grid: Arc<Grid>,
    pub params: ModelParams,
    pub u0: ComplexField,
}

fn setup(ctx: &mut Ctx) -> Result<Setup> {
    ctx.stage("initial_data");
    let cfg = ctx.cfg;
    let grid = Grid::new(cfg.model.dimension, cfg.grid.points_per_axis, cfg.grid.box_length)?;
    let params = cfg.model.params()?;
    let u0 = initial_field(&cfg.initial_data, &grid, params.power)?;
    Ok(Setup { grid, params, u0 })
}

/// Evolves over `[0, t_final]` (negated schedule when `direction < 0`),
/// writes the series and the final state, and records completion.
fn evolve_recorded(
    ctx: &mut Ctx,
    u0: &ComplexField,
    params: &ModelParams,
    direction: f64,
    suffix: &str,
    completed_check: &str,
) -> Result<(Trajectory, DiagnosticsTimeSeries)> {
    ctx.stage("evolve");
    let cfg = ctx.cfg;
    let times: Vec<f64> = cfg.checkpoint_times().iter().map(|t| direction * t).collect();
    let trajectory = evolve(u0, params, &cfg.stepper, direction * cfg.t_final.abs(), &times)?;
    ctx.stage("record");
    let series = record(&trajectory, params)?;
    ctx.series(&format!("timeseries{suffix}.csv"), &series)?;
    ctx.checkpoint(
        &format!("final{suffix}.ckp"),
        &trajectory.final_state.field,
        trajectory.final_state.time,
    )?;
    ctx.stage("analysis");
    ctx.detail(
        &format!("run{suffix}"),
        json!({
            "status": trajectory.status,
            "stats": trajectory.stats,
            "checkpoints_requested": times.len(),
            "checkpoints_reached": trajectory.checkpoints.len(),
        }),
    );
    let done = trajectory.status.is_completed();
    ctx.check(completed_check, done, f64::NAN, status_label(&trajectory.status));
    Ok((trajectory, series))
}

fn conservation_checks(ctx: &mut Ctx, series: &DiagnosticsTimeSeries) {
    let th = &ctx.cfg.analysis.thresholds;
    let (mass_limit, energy_limit) = (th.mass_drift, th.energy_drift);
    let (c, p) = (series.coefficient, series.power);
    let mass = series.max_relative_drift(|r| r.mass);
    let energy = series.max_relative_drift(|r| r.kinetic + c * r.nl_potential / (p + 2.0));
    ctx.check_below("mass_conservation", mass, mass_limit);
    ctx.check_below("energy_conservation", energy, energy_limit);
}

fn free_sanity(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (traj, series) = evolve_recorded(ctx, &s.u0, &s.params, 1.0, "", "run_completed")?;
    let limit = ctx.cfg.analysis.thresholds.free_invariant;
    ctx.check_below("mass_constant", series.max_relative_drift(|r| r.mass), limit);
    ctx.check_below("kinetic_constant", series.max_relative_drift(|r| r.kinetic), limit);
    ctx.check_below("ju_constant", series.max_relative_drift(|r| r.ju_norm), limit);
    let exact = free_propagate(&s.u0, traj.final_state.time)?;
    let err = traj.final_state.field.sub(&exact).l2_norm() / exact.l2_norm();
    ctx.check_below("matches_free_propagator", err, limit);
    Ok(())
}

fn scattering_norms(preset: Preset, params: &ModelParams) -> Vec<(ScatteringNorm, &'static str)> {
    match preset {
        Preset::LargeDataScatter => vec![(ScatteringNorm::L2, "l2"), (ScatteringNorm::Sigma, "sigma")],
        _ if exponent_report(params.dimension, params.power).s_c >= 0.0 => {
            vec![
                (ScatteringNorm::L2, "l2"),
                (ScatteringNorm::CriticalSobolev, "critical"),
            ]
        }
        _ => vec![(ScatteringNorm::L2, "l2"), (ScatteringNorm::CriticalWeight, "critical")],
    }
}

fn write_scattering(
    ctx: &mut Ctx,
    times: &[f64],
    report: &crate::diagnostics::ScatteringReport,
    labels: &[&str],
) -> Result<()> {
    let mut header = vec!["t"];
    header.extend(labels.iter().copied());
    let t_pairs: Vec<f64> = times[1..].to_vec();
    let mut cols: Vec<&[f64]> = vec![&t_pairs];
    for s in &report.series {
        cols.push(&s.differences);
    }
    ctx.columns("cauchy.csv", &header, &cols)
}

fn small_data_scatter(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (traj, series) = evolve_recorded(ctx, &s.u0, &s.params, 1.0, "", "run_completed")?;
    conservation_checks(ctx, &series);
    let norms = scattering_norms(ctx.cfg.preset, &s.params);
    let which: Vec<ScatteringNorm> = norms.iter().map(|n| n.0).collect();
    let report = scattering_profile(&traj, &which)?;
    let labels: Vec<&str> = norms.iter().map(|n| n.1).collect();
    write_scattering(ctx, &report.times, &report, &labels)?;
    let transient = ctx.cfg.analysis.transient;
    let limit = ctx.cfg.analysis.thresholds.scatter_final;
    for (series, label) in report.series.iter().zip(&labels) {
        let monotone = series.monotone_after(&report.times, transient);
        ctx.check(
            &format!("{label}_monotone"),
            monotone,
            f64::NAN,
            format!("differences nonincreasing for t >= {transient}"),
        );
        ctx.check_below(&format!("{label}_final"), series.last_relative(), limit);
    }
    ctx.detail("cauchy", serde_json::to_value(&report.series).unwrap_or_default());
    Ok(())
}

fn large_data_scatter(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (traj, series) = evolve_recorded(ctx, &s.u0, &s.params, 1.0, "", "run_completed")?;
    conservation_checks(ctx, &series);
    let norms = scattering_norms(Preset::LargeDataScatter, &s.params);
    let which: Vec<ScatteringNorm> = norms.iter().map(|n| n.0).collect();
    let report = scattering_profile(&traj, &which)?;
    let labels: Vec<&str> = norms.iter().map(|n| n.1).collect();
    write_scattering(ctx, &report.times, &report, &labels)?;
    let transient = ctx.cfg.analysis.transient;
    for (series, label) in report.series.iter().zip(&labels) {
        let tail: Vec<f64> = series
            .differences
            .iter()
            .zip(&report.times)
            .filter(|(_, t)| **t >= transient)
            .map(|(d, _)| *d)
            .collect();
        let (first, last) = (tail.first().copied(), tail.last().copied());
        let ratio = match (first, last) {
            (Some(a), Some(b)) if a > 0.0 => b / a,
            _ => f64::NAN,
        };
        ctx.check(
            &format!("{label}_cauchy_decreasing"),
            ratio < 1.0,
            ratio,
            format!("last / first difference after t = {transient} below 1"),
        );
    }
    let (q, r, mode) = match (s.params.dimension, one_d_critical_exponents(s.params.power)) {
        (1, Some((q, r))) => (q, r, SigmaMode::SupOverSigma),
        _ => (s.params.power + 2.0, s.params.power + 2.0, SigmaMode::LqInSigmaAndT),
    };
    let acc = spacetime_accumulation(&traj, q, r, mode)?;
    let norm_value = acc.last().copied().unwrap_or(0.0).powf(1.0 / q);
    let times = traj.times();
    ctx.columns("spacetime.csv", &["t", "accumulated"], &[&times, &acc])?;
    ctx.check(
        "spacetime_norm_finite",
        norm_value.is_finite(),
        norm_value,
        format!("L^{q}_t L^{r}_x norm over the run is finite"),
    );
    ctx.detail("cauchy", serde_json::to_value(&report.series).unwrap_or_default());
    Ok(())
}

fn pce_check(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (_, series) = evolve_recorded(ctx, &s.u0, &s.params, 1.0, "", "run_completed")?;
    conservation_checks(ctx, &series);
    let [lo, hi] = ctx.cfg.analysis.window;
    let th = ctx.cfg.analysis.thresholds.clone();
    let fine = compare_variants(&series, (lo, hi))?;
    let coarse = compare_variants(&series.subsample(2), (lo, hi))?;
    let residual = |c: &crate::diagnostics::PceComparison| {
        c.t_plus_1
            .aggregate_relative_residual
            .min(c.two_t_plus_1.aggregate_relative_residual)
    };
    let (rf, rc) = (residual(&fine), residual(&coarse));
    ctx.check_below("pce_residual", rf, th.pce_residual);
    ctx.check(
        "pce_separation",
        fine.separation >= th.pce_separation,
        fine.separation,
        format!(">= {}", th.pce_separation),
    );
    let refinement = rc / rf;
    let [a, b] = th.pce_refinement;
    ctx.check(
        "pce_refinement",
        (a..=b).contains(&refinement),
        refinement,
        format!("in [{a}, {b}]"),
    );
    ctx.columns(
        "pce.csv",
        &["t", "lhs", "rhs_t_plus_1", "rhs_two_t_plus_1"],
        &[
            &fine.t_plus_1.times,
            &fine.t_plus_1.lhs,
            &fine.t_plus_1.rhs,
            &fine.two_t_plus_1.rhs,
        ],
    )?;
    ctx.detail(
        "pce",
        json!({
            "selected": fine.selected.label(),
            "residual_t_plus_1": fine.t_plus_1.aggregate_relative_residual,
            "residual_two_t_plus_1": fine.two_t_plus_1.aggregate_relative_residual,
            "separation": fine.separation,
            "coarse_residual": rc,
            "refinement_ratio": refinement,
            "window": [lo, hi],
        }),
    );
    Ok(())
}

fn decay_rates(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (_, series) = evolve_recorded(ctx, &s.u0, &s.params, 1.0, "", "run_completed")?;
    conservation_checks(ctx, &series);
    let [lo, hi] = ctx.cfg.analysis.window;
    let th = ctx.cfg.analysis.thresholds.clone();
    let ju = decay_fit(&series, DecayQuantity::JuNorm, (lo, hi))?;
    let w = decay_fit(&series, DecayQuantity::WNormP2, (lo, hi))?;
    ctx.check_at_most("ju_slope", ju.exponent, th.ju_slope_max);
    ctx.check_at_most("w_slope", w.exponent, th.w_slope_max);
    let rep = exponent_report(s.params.dimension, s.params.power);
    ctx.detail(
        "fits",
        json!({
            "ju": ju,
            "w": w,
            "predicted_ju_exponent": rep.decay_c1,
            "predicted_w_exponent": rep.decay_rate_w,
        }),
    );
    Ok(())
}

fn nonscattering(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (traj, series) = evolve_recorded(ctx, &s.u0, &s.params, 1.0, "", "run_completed")?;
    conservation_checks(ctx, &series);
    let cfg = ctx.cfg;
    let probe_data = cfg.analysis.probe.as_ref().expect("validated");
    let psi = initial_field(probe_data, &s.grid, s.params.power)?;
    let [lo, hi] = cfg.analysis.window;
    let [a, b] = cfg.analysis.thresholds.probe_exponent;
    let report = nonscattering_probe(&traj, &psi, (lo, hi))?;
    let exponent = report.fit.map_or(f64::NAN, |f| f.exponent);
    ctx.check(
        "probe_exponent",
        (a..=b).contains(&exponent),
        exponent,
        format!("in [{a}, {b}]"),
    );
    ctx.check(
        "overlap_increasing",
        report.overlap_increasing,
        f64::NAN,
        format!("strictly increasing on [{lo}, {hi}]"),
    );
    ctx.columns("overlap.csv", &["t", "overlap"], &[&report.times, &report.overlap])?;
    ctx.columns(
        "overlap_derivative.csv",
        &["t", "derivative"],
        &[&report.derivative_times, &report.derivative],
    )?;
    ctx.detail(
        "probe",
        json!({
            "fit": report.fit,
            "predicted_exponent": -(s.params.dimension as f64) * s.params.power / 2.0,
            "derivative_changes_sign": report.derivative_changes_sign,
            "c0": report.c0,
            "warnings": report.warnings,
        }),
    );
    Ok(())
}

fn time_reversal(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    let (backward, _) = evolve_recorded(ctx, &s.u0, &s.params, -1.0, "_backward", "backward_completed")?;
    let v0 = reversal_map(&s.u0)?;
    let (forward, _) = evolve_recorded(ctx, &v0, &s.params, 1.0, "_forward", "forward_completed")?;
    let th = ctx.cfg.analysis.thresholds.clone();
    if !(forward.status.is_completed() && backward.status.is_completed()) {
        ctx.check("field_deviation", false, f64::NAN, "both runs must complete".into());
        ctx.check("energy_deviation", false, f64::NAN, "both runs must complete".into());
        return Ok(());
    }
    let report = time_reversal_check(&forward, &backward)?;
    ctx.check_below("field_deviation", report.max_field_deviation, th.reversal_field);
    ctx.check_below("energy_deviation", report.max_energy_deviation, th.reversal_energy);
    ctx.columns(
        "reversal.csv",
        &["t", "field_deviation", "energy_deviation"],
        &[&report.times, &report.field_deviation, &report.energy_deviation],
    )?;
    Ok(())
}

/// One directional run of the dichotomy.
#[derive(Debug, Clone, serde::Serialize)]
struct Shot {
    lambda: f64,
    direction: f64,
    status: RunStatus,
    end_time: f64,
    max_gradient_ratio: f64,
    accepted: usize,
    rejected: usize,
}

impl Shot {
    fn status_code(&self) -> f64 {
        match self.status {
            RunStatus::Completed => 0.0,
            RunStatus::BlowupDetected { .. } => 1.0,
            RunStatus::InvalidatedBoundaryMass { .. } => 2.0,
        }
    }
}

fn shoot(ctx: &mut Ctx, shape: &ComplexField, params: &ModelParams, lambda: f64, direction: f64) -> Result<Shot> {
    let cfg = ctx.cfg;
    let u0 = shape.scale(Complex64::new(lambda, 0.0));
    let times: Vec<f64> = cfg.checkpoint_times().iter().map(|t| direction * t).collect();
    let traj = evolve(&u0, params, &cfg.stepper, direction * cfg.t_final.abs(), &times)?;
    let g0 = gradient_norm(&u0);
    let max_gradient_ratio = traj
        .checkpoints
        .iter()
        .map(|c| &c.field)
        .chain([&traj.final_state.field])
        .map(|u| gradient_norm(u) / g0)
        .fold(0.0, f64::max);
    Ok(Shot {
        lambda,
        direction,
        status: traj.status,
        end_time: traj.final_state.time,
        max_gradient_ratio,
        accepted: traj.stats.accepted,
        rejected: traj.stats.rejected,
    })
}

fn blowup_dichotomy(ctx: &mut Ctx) -> Result<()> {
    let s = setup(ctx)?;
    ctx.stage("evolve");
    let dc = ctx.cfg.dichotomy.clone();
    let th = ctx.cfg.analysis.thresholds.clone();
    let mut shots: Vec<Shot> = Vec::new();
    let run = |ctx: &mut Ctx, shots: &mut Vec<Shot>, lambda: f64, direction: f64| -> Result<RunStatus> {
        if let Some(s) = shots.iter().find(|s| s.lambda == lambda && s.direction == direction) {
            return Ok(s.status);
        }
        let shot = shoot(ctx, &s.u0, &s.params, lambda, direction)?;
        let status = shot.status;
        shots.push(shot);
        Ok(status)
    };

    let (mut lo, mut hi) = (dc.lambda_low, dc.lambda_high);
    let hi_forward = run(ctx, &mut shots, hi, 1.0)?;
    let lo_forward = run(ctx, &mut shots, lo, 1.0)?;
    let mut bisections = 0;
    if hi_forward.is_blowup() && lo_forward.is_completed() {
        while hi / lo > th.bracket_ratio && bisections < dc.max_bisections {
            let mid = (lo * hi).sqrt();
            match run(ctx, &mut shots, mid, 1.0)? {
                st if st.is_blowup() => hi = mid,
                st if st.is_completed() => lo = mid,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "bisection run at lambda = {mid} ended without a verdict: {}",
                        status_label(&other)
                    )))
                }
            }
            bisections += 1;
        }
    }
    let lo_backward = run(ctx, &mut shots, lo, -1.0)?;
    let hi_backward = run(ctx, &mut shots, hi, -1.0)?;

    ctx.stage("analysis");
    let outcome = |lambda: f64| -> Vec<&Shot> { shots.iter().filter(|s| s.lambda == lambda).collect() };
    let low_ok = lo_backward.is_completed() && outcome(lo).iter().all(|s| s.status.is_completed());
    ctx.check(
        "low_completes_both_directions",
        low_ok,
        lo,
        format!("lambda = {lo} completes t in [-T, T]"),
    );
    let low_ratio = outcome(lo).iter().map(|s| s.max_gradient_ratio).fold(0.0, f64::max);
    ctx.check_below("low_gradient_bounded", low_ratio, th.low_gradient_factor);
    let high_ok = hi_backward.is_blowup() && outcome(hi).iter().all(|s| s.status.is_blowup());
    ctx.check(
        "high_blows_up_both_directions",
        high_ok,
        hi,
        format!("lambda = {hi} blows up forward and backward"),
    );
    ctx.check_at_most("bracket_ratio", hi / lo, th.bracket_ratio);

    let mut ordered = shots.clone();
    ordered.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.direction.total_cmp(&b.direction)));
    ctx.csv(
        "dichotomy.csv",
        &[
            "lambda",
            "direction",
            "status_code",
            "end_time",
            "max_gradient_ratio",
            "accepted_steps",
            "rejected_steps",
        ],
        ordered
            .iter()
            .map(|s| {
                vec![
                    float(s.lambda),
                    float(s.direction),
                    float(s.status_code()),
                    float(s.end_time),
                    float(s.max_gradient_ratio),
                    s.accepted.to_string(),
                    s.rejected.to_string(),
                ]
            })
            .collect(),
    )?;
    let mut lambdas: Vec<f64> = ordered.iter().map(|s| s.lambda).collect();
    lambdas.dedup();
    let mixed: Vec<f64> = lambdas
        .into_iter()
        .filter(|&l| {
            let o = outcome(l);
            o.len() == 2 && o[0].status.is_blowup() != o[1].status.is_blowup()
        })
        .collect();
    ctx.detail(
        "dichotomy",
        json!({
            "bracket": [lo, hi],
            "bisections": bisections,
            "mixed_outcomes": mixed,
            "status_codes": {"0": "completed", "1": "blowup", "2": "invalidated_boundary_mass"},
            "runs": ordered,
        }),
    );
    Ok(())
}

fn probe_direction(rng: &mut ChaCha8Rng, grid: &Arc<Grid>) -> ComplexField {
    let c: Vec<Complex64> = (0..4)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexField::from_fn(grid, |x| {
        let x = x[0];
        let poly = c[0] + c[1] * x + c[2] * (x * x / 2.0) + c[3] * (x * x * x / 6.0);
        poly * (-x * x / 4.0).exp()
    })
}

/// Largest relative mismatch between `Re<grad log J, eta>` and the central
/// difference of `log J` over `probes` seeded random directions.
pub fn gradient_fd_error(
    phi: &ComplexField,
    p: f64,
    s: f64,
    nodes_per_unit: usize,
    probes: usize,
    step: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let grad = sgn_gradient(phi, p, s, nodes_per_unit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..probes)
        .map(|_| {
            let eta = probe_direction(&mut rng, phi.grid());
            let analytic = grad.inner(&eta).re;
            let shift = |e: f64| phi.add(&eta.scale(Complex64::new(e, 0.0)));
            let up = sgn_quotient(&shift(step), p, s, nodes_per_unit)?.ln();
            let down = sgn_quotient(&shift(-step), p, s, nodes_per_unit)?.ln();
            let fd = (up - down) / (2.0 * step);
            Ok((fd - analytic).abs() / analytic.abs())
        })
        .collect()
}

fn ground_state(ctx: &mut Ctx) -> Result<()> {
    ctx.stage("initial_data");
    let cfg = ctx.cfg;
    let grid = Grid::new(1, cfg.grid.points_per_axis, cfg.grid.box_length)?;
    let p = cfg.model.power;
    let gs = cfg.ground_state.clone();
    let th = cfg.analysis.thresholds.clone();
    let inits = gs
        .initializations
        .iter()
        .map(|d| initial_field(d, &grid, p))
        .collect::<Result<Vec<_>>>()?;

    ctx.stage("gradient_check");
    let solver = &gs.solver;
    let errors = gradient_fd_error(
        &inits[0],
        p,
        solver.sigma_half_width,
        solver.sigma_nodes_per_unit,
        gs.fd_probes,
        gs.fd_step,
        ctx.cfg.rng_seed,
    )?;
    let worst = errors.iter().copied().fold(0.0, f64::max);
    ctx.check_below("gradient_fd", worst, th.fd_gradient);

    ctx.stage("optimize");
    let results = inits
        .iter()
        .map(|u| optimize(u, p, solver))
        .collect::<Result<Vec<GroundStateResult>>>()?;
    ctx.stage("analysis");
    let best = &results[0];
    ctx.check(
        "converged",
        best.converged,
        best.iterations as f64,
        "gain below tolerance".into(),
    );
    ctx.check(
        "quotient_monotone",
        results.iter().all(|r| r.quotient_monotone()),
        f64::NAN,
        "quotient nondecreasing along every run".into(),
    );
    let el = results.iter().map(|r| r.el_residual).fold(0.0, f64::max);
    ctx.check_below("el_residual", el, th.el_residual);
    let values: Vec<f64> = results.iter().map(|r| r.quotient_value).collect();
    let top = values.iter().copied().fold(f64::MIN, f64::max);
    let spread = values.iter().map(|v| (top - v) / top).fold(0.0, f64::max);
    ctx.check_below("init_agreement", spread, th.init_agreement);

    let history: Vec<f64> = (0..best.quotient_history.len()).map(|k| k as f64).collect();
    ctx.columns(
        "quotient_history.csv",
        &["iteration", "quotient"],
        &[&history, &best.quotient_history],
    )?;
    let x: Vec<f64> = grid.coords().iter().map(|x| x * best.length_scale).collect();
    let re: Vec<f64> = best
        .profile
        .values()
        .iter()
        .map(|z| best.amplitude_scale * z.re)
        .collect();
    let im: Vec<f64> = best
        .profile
        .values()
        .iter()
        .map(|z| best.amplitude_scale * z.im)
        .collect();
    ctx.columns("ground_state_profile.csv", &["x", "re", "im"], &[&x, &re, &im])?;
    let summaries: Vec<_> = results.iter().map(|r| r.summary()).collect();
    ctx.json("ground_state.json", &json!({ "runs": summaries, "fd_errors": errors }))?;
    ctx.detail(
        "ground_state",
        json!({
            "quotient_values": values,
            "relative_spread": spread,
            "uniqueness_note": if spread > th.init_agreement {
                "initializations reached different quotient values"
            } else {
                "initializations agree"
            },
        }),
    );
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    float(x.unwrap_or(f64::NAN))
}

fn exponents_table(ctx: &mut Ctx) -> Result<()> {
    ctx.stage("analysis");
    let e = ctx.cfg.exponents.clone();
    let tol = ctx.cfg.analysis.thresholds.exponent_tolerance;
    let mut reports = Vec::new();
    for &d in &e.dimensions {
        for &p in &e.powers {
            reports.push(exponent_report(d, p));
        }
    }
    let mut bad_pairs = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_label = String::new();
    for r in &reports {
        for (label, q, rr) in emitted_pairs(r) {
            if !admissible(q, rr, r.d) {
                bad_pairs.push(format!("{label} ({q}, {rr}) at d = {}, p = {}", r.d, r.p));
            }
        }
        for (label, res) in scaling_residuals(r) {
            if res.abs() > worst {
                worst = res.abs();
                worst_label = format!("{label} at d = {}, p = {}", r.d, r.p);
            }
        }
    }
    ctx.check(
        "pairs_admissible",
        bad_pairs.is_empty(),
        bad_pairs.len() as f64,
        if bad_pairs.is_empty() {
            "all emitted pairs admissible".into()
        } else {
            bad_pairs.join("; ")
        },
    );
    ctx.check(
        "scaling_relations",
        worst <= tol,
        worst,
        format!("<= {tol:e} (largest: {worst_label})"),
    );
    let pair = |t: Option<crate::exponents::ExponentTriple>| match t {
        Some(t) => [float(t.q), float(t.r), float(t.r_c)],
        None => [float(f64::NAN), float(f64::NAN), float(f64::NAN)],
    };
    ctx.csv(
        "exponents.csv",
        &[
            "d",
            "p",
            "s_c",
            "gamma",
            "regime",
            "inter_q",
            "inter_r",
            "inter_r_c",
            "sub_q",
            "sub_r",
            "sub_r_c",
            "Q_threshold",
            "decay_c1",
            "decay_rate_w",
            "p0",
            "one_d_scattering_ok",
        ],
        reports
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.d.to_string(),
                    float(r.p),
                    float(r.s_c),
                    float(r.gamma),
                    serde_json::to_value(r.regime)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                ];
                row.extend(pair(r.intercritical_pair));
                row.extend(pair(r.subcritical_triple));
                row.extend([opt(r.q_threshold), opt(r.decay_c1), opt(r.decay_rate_w), float(r.p0)]);
                row.push(match r.one_d_scattering_ok {
                    Some(true) => "1".into(),
                    Some(false) => "0".into(),
                    None => String::new(),
                });
                row
            })
            .collect(),
    )?;
    ctx.json("exponents.json", &reports)?;
    Ok(())
}

pub(super) fn run_pipeline(ctx: &mut Ctx) -> Result<()> {
    match ctx.cfg.preset {
        Preset::FreeSanity => free_sanity(ctx),
        Preset::SmallDataScatterIntercritical | Preset::SmallDataScatterSubcritical => small_data_scatter(ctx),
        Preset::LargeDataScatter => large_data_scatter(ctx),
        Preset::PceCheck => pce_check(ctx),
        Preset::DecayRates => decay_rates(ctx),
        Preset::Nonscattering => nonscattering(ctx),
        Preset::TimeReversal => time_reversal(ctx),
        Preset::BlowupDichotomy => blowup_dichotomy(ctx),
        Preset::GroundState => ground_state(ctx),
        Preset::ExponentsTable => exponents_table(ctx),
    }
}
