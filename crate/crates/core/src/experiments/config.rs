use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::presets::{check_names, preset_defaults};
use crate::diagnostics::MAX_SPACING;
use crate::dynamics::{ModelParams, Sign, StepperConfig, DEFAULT_SIGMA_NODES};
use crate::exponents::{exponent_report, p0};
use crate::ground_state::GroundStateConfig;
use crate::spectral::Grid;

/// Which pipeline a config runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    FreeSanity,
    SmallDataScatterIntercritical,
    SmallDataScatterSubcritical,
    LargeDataScatter,
    PceCheck,
    DecayRates,
    Nonscattering,
    TimeReversal,
    BlowupDichotomy,
    GroundState,
    ExponentsTable,
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::FreeSanity,
        Preset::SmallDataScatterIntercritical,
        Preset::SmallDataScatterSubcritical,
        Preset::LargeDataScatter,
        Preset::PceCheck,
        Preset::DecayRates,
        Preset::Nonscattering,
        Preset::TimeReversal,
        Preset::BlowupDichotomy,
        Preset::GroundState,
        Preset::ExponentsTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FreeSanity => "free_sanity",
            Preset::SmallDataScatterIntercritical => "small_data_scatter_intercritical",
            Preset::SmallDataScatterSubcritical => "small_data_scatter_subcritical",
            Preset::LargeDataScatter => "large_data_scatter",
            Preset::PceCheck => "pce_check",
            Preset::DecayRates => "decay_rates",
            Preset::Nonscattering => "nonscattering",
            Preset::TimeReversal => "time_reversal",
            Preset::BlowupDichotomy => "blowup_dichotomy",
            Preset::GroundState => "ground_state",
            Preset::ExponentsTable => "exponents_table",
        }
    }

    fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub dimension: usize,
    pub power: f64,
    pub sign: Sign,
    /// Number of Gauss–Legendre nodes for the sigma average.
    pub sigma_nodes: usize,
    pub nonlinearity_weight: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            dimension: 1,
            power: 6.0,
            sign: Sign::Defocusing,
            sigma_nodes: DEFAULT_SIGMA_NODES,
            nonlinearity_weight: 1.0,
        }
    }
}

impl ModelConfig {
    pub fn params(&self) -> crate::Result<ModelParams> {
        let mut params = ModelParams::with_node_count(self.dimension, self.power, self.sign, self.sigma_nodes)?;
        params.nonlinearity_weight = self.nonlinearity_weight;
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub points_per_axis: usize,
    pub box_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points_per_axis: 2048,
            box_length: 256.0,
        }
    }
}

/// Initial data. Coordinates are relative to the box center; `center` and
/// `velocity` may be left empty (zero) or list one entry per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// `A exp(-|x-c|^2/w^2) exp(i v.x)`. With `critical_norm` set, `A` is
    /// rescaled so that the data has that norm in the critical space of the
    /// model (`H^{s_c}` when `s_c >= 0`, `|| |x|^gamma . ||_2` otherwise).
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
        #[serde(default)]
        velocity: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        critical_norm: Option<f64>,
    },
    /// `A sech(|x-c|/w) exp(i v.x)`.
    Sech {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
        #[serde(default)]
        velocity: Vec<f64>,
    },
    /// `A exp(2 pi i m.x / L)`.
    PlaneWave { amplitude: f64, mode: Vec<i64> },
    /// A binary checkpoint written by an earlier run, on the configured grid.
    CustomFile { path: PathBuf },
}

impl InitialData {
    fn allowed_keys(kind: &str) -> Option<&'static [&'static str]> {
        Some(match kind {
            "gaussian" => &["kind", "amplitude", "width", "center", "velocity", "critical_norm"],
            "sech" => &["kind", "amplitude", "width", "center", "velocity"],
            "plane_wave" => &["kind", "amplitude", "mode"],
            "custom_file" => &["kind", "path"],
            _ => return None,
        })
    }

    fn validate(&self, dimension: usize, label: &str, problems: &mut Vec<String>) {
        let axes = |v: &[f64], what: &str, problems: &mut Vec<String>| {
            if !(v.is_empty() || v.len() == dimension) || v.iter().any(|x| !x.is_finite()) {
                problems.push(format!(
                    "{label}.{what} must be empty or hold {dimension} finite entries"
                ));
            }
        };
        match self {
            InitialData::Gaussian {
                amplitude,
                width,
                center,
                velocity,
                critical_norm,
            } => {
                positive(*width, &format!("{label}.width"), problems);
                finite(*amplitude, &format!("{label}.amplitude"), problems);
                axes(center, "center", problems);
                axes(velocity, "velocity", problems);
                if let Some(n) = critical_norm {
                    positive(*n, &format!("{label}.critical_norm"), problems);
                }
            }
            InitialData::Sech {
                amplitude,
                width,
                center,
                velocity,
            } => {
                positive(*width, &format!("{label}.width"), problems);
                finite(*amplitude, &format!("{label}.amplitude"), problems);
                axes(center, "center", problems);
                axes(velocity, "velocity", problems);
            }
            InitialData::PlaneWave { amplitude, mode } => {
                finite(*amplitude, &format!("{label}.amplitude"), problems);
                if mode.len() != dimension {
                    problems.push(format!("{label}.mode must hold {dimension} entries"));
                }
            }
            InitialData::CustomFile { path } => {
                if !path.is_file() {
                    problems.push(format!("{label}.path {} does not exist", path.display()));
                }
            }
        }
    }

    fn resolve_paths(&mut self, base: &Path) {
        if let InitialData::CustomFile { path } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

/// Checkpoint schedule: either a uniform spacing from 0 to `t_final`
/// (inclusive) or an explicit list.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Checkpoints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub every: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
}

impl Checkpoints {
    pub fn every(dt: f64) -> Self {
        Checkpoints {
            every: Some(dt),
            times: None,
        }
    }

    /// Checkpoint times on `[0, |t_final|]` (always nonnegative).
    pub fn times(&self, t_final: f64) -> Vec<f64> {
        let span = t_final.abs();
        match (&self.times, self.every) {
            (Some(times), _) => times.clone(),
            (None, Some(every)) => {
                let n = (span / every + 1e-9).floor() as usize;
                let mut out: Vec<f64> = (0..=n).map(|k| k as f64 * every).collect();
                if span - out[n] > 1e-9 * every {
                    out.push(span);
                } else {
                    out[n] = span;
                }
                out
            }
            (None, None) => vec![0.0, span],
        }
    }

    fn validate(&self, t_final: f64, problems: &mut Vec<String>) {
        match (&self.times, self.every) {
            (Some(_), Some(_)) => problems.push("checkpoints: give either every or times, not both".into()),
            (None, None) => problems.push("checkpoints: one of every or times is required".into()),
            (None, Some(every)) => {
                if !(every > 0.0 && every.is_finite()) {
                    problems.push(format!("checkpoints.every must be positive, got {every}"));
                } else if t_final.abs() / every > 1e6 {
                    problems.push("checkpoints.every yields more than 10^6 checkpoints".into());
                }
            }
            (Some(times), None) => {
                if times.is_empty() {
                    problems.push("checkpoints.times is empty".into());
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) {
                    problems.push("checkpoints.times must be strictly increasing".into());
                }
                if times.iter().any(|&t| !(0.0..=t_final.abs()).contains(&t)) {
                    problems.push("checkpoints.times must lie in [0, |t_final|]".into());
                }
            }
        }
    }
}

/// Pass/fail limits of the preset checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub free_invariant: f64,
    pub scatter_final: f64,
    pub pce_residual: f64,
    pub pce_separation: f64,
    pub pce_refinement: [f64; 2],
    pub ju_slope_max: f64,
    pub w_slope_max: f64,
    pub probe_exponent: [f64; 2],
    pub reversal_field: f64,
    pub reversal_energy: f64,
    pub low_gradient_factor: f64,
    pub bracket_ratio: f64,
    pub el_residual: f64,
    pub fd_gradient: f64,
    pub init_agreement: f64,
    pub exponent_tolerance: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            mass_drift: 1e-8,
            energy_drift: 1e-6,
            free_invariant: 1e-10,
            scatter_final: 1e-3,
            pce_residual: 1e-3,
            pce_separation: 10.0,
            pce_refinement: [3.0, 5.0],
            ju_slope_max: 0.6,
            w_slope_max: -0.025,
            probe_exponent: [-0.65, -0.35],
            reversal_field: 1e-5,
            reversal_energy: 1e-6,
            low_gradient_factor: 10.0,
            bracket_ratio: 2.0,
            el_residual: 1e-3,
            fd_gradient: 1e-4,
            init_agreement: 1e-4,
            exponent_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    /// Fit or identity window `[t0, t1]`.
    pub window: [f64; 2],
    /// Cauchy differences are required to be monotone from this time on.
    pub transient: f64,
    /// Test function of the non-scattering overlap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<InitialData>,
    pub thresholds: Thresholds,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            window: [0.0, 0.0],
            transient: 0.0,
            probe: None,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DichotomyConfig {
    /// Amplitudes of `lambda * shape`; the low end must complete in both
    /// directions and the high end blow up forward.
    pub lambda_low: f64,
    pub lambda_high: f64,
    pub max_bisections: usize,
}

impl Default for DichotomyConfig {
    fn default() -> Self {
        DichotomyConfig {
            lambda_low: 1.0,
            lambda_high: 4.0,
            max_bisections: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GroundStateSection {
    pub solver: GroundStateConfig,
    /// Starting profiles; the first one also hosts the gradient check.
    pub initializations: Vec<InitialData>,
    pub fd_probes: usize,
    pub fd_step: f64,
}

impl Default for GroundStateSection {
    fn default() -> Self {
        GroundStateSection {
            solver: GroundStateConfig::default(),
            initializations: Vec::new(),
            fd_probes: 10,
            fd_step: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExponentsSection {
    pub dimensions: Vec<usize>,
    pub powers: Vec<f64>,
}

impl Default for ExponentsSection {
    fn default() -> Self {
        ExponentsSection {
            dimensions: vec![1, 2, 3],
            powers: vec![0.5, 1.0, 4.0 / 3.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0],
        }
    }
}

/// A complete, validated run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub preset: Preset,
    pub output_dir: PathBuf,
    pub rng_seed: u64,
    pub t_final: f64,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub stepper: StepperConfig,
    pub initial_data: InitialData,
    pub checkpoints: Checkpoints,
    pub analysis: AnalysisConfig,
    pub dichotomy: DichotomyConfig,
    pub ground_state: GroundStateSection,
    pub exponents: ExponentsSection,
    /// Checks whose failure makes the run exit nonzero; all hard checks of
    /// the preset when omitted.
    pub hard_fail: Vec<String>,
}

/// Everything wrong with a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl ConfigError {
    fn single(problem: impl Into<String>) -> Self {
        ConfigError {
            problems: vec![problem.into()],
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config:")?;
        for p in &self.problems {
            write!(f, "\n  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

fn positive(x: f64, what: &str, problems: &mut Vec<String>) {
    if !(x > 0.0 && x.is_finite()) {
        problems.push(format!("{what} must be positive and finite, got {x}"));
    }
}

fn finite(x: f64, what: &str, problems: &mut Vec<String>) {
    if !x.is_finite() {
        problems.push(format!("{what} must be finite, got {x}"));
    }
}

/// Tables that a user value replaces instead of merging into.
const REPLACED_TABLES: [&str; 3] = ["initial_data", "checkpoints", "analysis.probe"];

fn merge(base: &mut toml::Table, user: toml::Table, prefix: &str) {
    for (key, value) in user {
        let path = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(u)) if !REPLACED_TABLES.contains(&path.as_str()) => {
                merge(b, u, &path)
            }
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

fn check_initial_data_keys(value: Option<&toml::Value>, label: &str, problems: &mut Vec<String>) {
    let Some(toml::Value::Table(table)) = value else {
        return;
    };
    let Some(kind) = table.get("kind").and_then(|k| k.as_str()) else {
        problems.push(format!("{label}.kind is required"));
        return;
    };
    let Some(allowed) = InitialData::allowed_keys(kind) else {
        problems.push(format!(
            "{label}.kind: unknown kind {kind:?} (gaussian, sech, plane_wave, custom_file)"
        ));
        return;
    };
    for key in table.keys().filter(|k| !allowed.contains(&k.as_str())) {
        problems.push(format!("unknown key {label}.{key}"));
    }
}

/// Parses a config from TOML text. Relative paths are resolved against
/// `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig, ConfigError> {
    let user: toml::Table = toml::from_str(text).map_err(|e| ConfigError::single(format!("TOML syntax: {e}")))?;
    let mut problems = Vec::new();
    let preset = match user.get("preset") {
        None => return Err(ConfigError::single("missing required field preset")),
        Some(toml::Value::String(name)) => match Preset::from_name(name) {
            Some(p) => p,
            None => {
                let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                return Err(ConfigError::single(format!(
                    "unknown preset {name:?}; expected one of {}",
                    names.join(", ")
                )));
            }
        },
        Some(other) => return Err(ConfigError::single(format!("preset must be a string, got {other}"))),
    };
    if !user.contains_key("output_dir") {
        problems.push("missing required field output_dir".to_string());
    }
    check_initial_data_keys(user.get("initial_data"), "initial_data", &mut problems);
    if let Some(toml::Value::Table(a)) = user.get("analysis") {
        check_initial_data_keys(a.get("probe"), "analysis.probe", &mut problems);
    }
    if let Some(toml::Value::Table(g)) = user.get("ground_state") {
        if let Some(toml::Value::Array(inits)) = g.get("initializations") {
            for (i, v) in inits.iter().enumerate() {
                check_initial_data_keys(Some(v), &format!("ground_state.initializations[{i}]"), &mut problems);
            }
        }
    }

    let mut merged = match toml::Table::try_from(preset_defaults(preset)) {
        Ok(t) => t,
        Err(e) => {
            return Err(ConfigError::single(format!(
                "internal: preset defaults do not serialize: {e}"
            )))
        }
    };
    merge(&mut merged, user, "");

    let mut unknown = Vec::new();
    let parsed: Result<RunConfig, _> =
        serde_ignored::deserialize(toml::Value::Table(merged), |path| unknown.push(path.to_string()));
    problems.extend(unknown.into_iter().map(|p| format!("unknown key {p}")));
    let mut config = match parsed {
        Ok(c) => c,
        Err(e) => {
            problems.push(e.to_string().trim().to_string());
            return Err(ConfigError { problems });
        }
    };
    if config.output_dir.is_relative() {
        config.output_dir = base_dir.join(&config.output_dir);
    }
    config.initial_data.resolve_paths(base_dir);
    if let Some(p) = config.analysis.probe.as_mut() {
        p.resolve_paths(base_dir);
    }
    for init in &mut config.ground_state.initializations {
        init.resolve_paths(base_dir);
    }
    problems.extend(config.problems());
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError { problems })
    }
}

/// Reads and validates a config file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::single(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let base = if base.as_os_str().is_empty() {
        Path::new(".")
    } else {
        base
    };
    parse_config_str(&text, base)
}

impl RunConfig {
    /// The config as TOML; parsing it back yields an identical config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes to TOML")
    }

    pub fn checkpoint_times(&self) -> Vec<f64> {
        self.checkpoints.times(self.t_final)
    }

    /// Every semantic problem, empty when the config is runnable.
    pub fn problems(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let m = &self.model;
        let d = m.dimension;
        let p = m.power;
        if let Err(e) = m.params() {
            problems.push(format!("model: {e}"));
        }
        if let Err(e) = Grid::new(d.clamp(1, 2), self.grid.points_per_axis, self.grid.box_length) {
            problems.push(format!("grid: {e}"));
        }
        if let Err(e) = self.stepper.validate() {
            problems.push(format!("stepper: {e}"));
        }
        let dynamic = !matches!(self.preset, Preset::GroundState | Preset::ExponentsTable);
        if dynamic {
            positive(self.t_final.abs(), "t_final", &mut problems);
            self.checkpoints.validate(self.t_final, &mut problems);
            self.initial_data.validate(d, "initial_data", &mut problems);
        }
        let [t0, t1] = self.analysis.window;
        let needs_window = matches!(
            self.preset,
            Preset::PceCheck | Preset::DecayRates | Preset::Nonscattering
        );
        if needs_window && !(0.0 <= t0 && t0 < t1 && t1 <= self.t_final) {
            problems.push(format!(
                "analysis.window [{t0}, {t1}] must satisfy 0 <= t0 < t1 <= t_final = {}",
                self.t_final
            ));
        }
        let valid_power = p > 0.0 && p.is_finite() && (1..=2).contains(&d);
        let rep = valid_power.then(|| exponent_report(d, p));
        match self.preset {
            Preset::FreeSanity => {
                if m.nonlinearity_weight != 0.0 {
                    problems.push("free_sanity requires model.nonlinearity_weight = 0".into());
                }
            }
            Preset::SmallDataScatterIntercritical => {
                if let Some(r) = &rep {
                    if !(r.s_c > 0.0) {
                        problems.push(format!(
                            "small_data_scatter_intercritical requires p > 4/d, got p = {p}"
                        ));
                    }
                }
            }
            Preset::SmallDataScatterSubcritical => {
                if let Some(r) = &rep {
                    if !(r.gamma > 0.0 && r.gamma <= 1.0) || r.s_c >= 0.0 {
                        problems.push(format!(
                            "small_data_scatter_subcritical requires 2/d < p < 4/d with gamma <= 1, got p = {p}"
                        ));
                    }
                }
            }
            Preset::LargeDataScatter => {
                if m.sign != Sign::Defocusing {
                    problems.push("large_data_scatter requires the defocusing sign".into());
                }
                if d == 1 && !(p > p0()) {
                    problems.push(format!(
                        "large_data_scatter in d = 1 requires p > 3 + sqrt(5), got p = {p}"
                    ));
                }
                if d == 2 && !(p > 2.0) {
                    problems.push(format!("large_data_scatter in d = 2 requires p > 4/d, got p = {p}"));
                }
            }
            Preset::PceCheck => {
                let times = self.checkpoint_times();
                if times.windows(2).any(|w| w[1] - w[0] > MAX_SPACING + 1e-12) {
                    problems.push(format!("pce_check needs checkpoint spacing <= {MAX_SPACING}"));
                }
            }
            Preset::DecayRates => {
                if let Some(r) = &rep {
                    if r.decay_c1.is_none() {
                        problems.push(format!("decay_rates requires p > 4/d, got p = {p}"));
                    }
                }
            }
            Preset::Nonscattering => {
                if valid_power && !(p <= 2.0 / d as f64) {
                    problems.push(format!("nonscattering requires p <= 2/d, got p = {p}"));
                }
                match &self.analysis.probe {
                    None => problems.push("nonscattering requires analysis.probe".into()),
                    Some(probe) => probe.validate(d, "analysis.probe", &mut problems),
                }
            }
            Preset::TimeReversal => {}
            Preset::BlowupDichotomy => {
                if m.sign != Sign::Focusing {
                    problems.push("blowup_dichotomy requires the focusing sign".into());
                }
                if !(p > 8.0) {
                    problems.push(format!("blowup_dichotomy requires p > 8, got p = {p}"));
                }
                if d != 1 {
                    problems.push("blowup_dichotomy requires dimension 1".into());
                }
                let dc = &self.dichotomy;
                if !(dc.lambda_low > 0.0 && dc.lambda_low < dc.lambda_high && dc.lambda_high.is_finite()) {
                    problems.push(format!(
                        "dichotomy needs 0 < lambda_low < lambda_high, got {} and {}",
                        dc.lambda_low, dc.lambda_high
                    ));
                }
            }
            Preset::GroundState => {
                if !(p > 8.0) {
                    problems.push(format!("ground_state requires p > 8, got p = {p}"));
                }
                if d != 1 {
                    problems.push("ground_state requires dimension 1".into());
                }
                let gs = &self.ground_state;
                if let Err(e) = gs.solver.validate() {
                    problems.push(format!("ground_state.solver: {e}"));
                }
                if gs.initializations.is_empty() {
                    problems.push("ground_state.initializations is empty".into());
                }
                for (i, init) in gs.initializations.iter().enumerate() {
                    init.validate(d, &format!("ground_state.initializations[{i}]"), &mut problems);
                }
                if gs.fd_probes == 0 {
                    problems.push("ground_state.fd_probes must be positive".into());
                }
                positive(gs.fd_step, "ground_state.fd_step", &mut problems);
            }
            Preset::ExponentsTable => {
                let e = &self.exponents;
                if e.dimensions.is_empty() || e.dimensions.contains(&0) {
                    problems.push("exponents.dimensions must be a nonempty list of positive integers".into());
                }
                if e.powers.is_empty() || e.powers.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
                    problems.push("exponents.powers must be a nonempty list of positive numbers".into());
                }
            }
        }
        let known: BTreeSet<&str> = check_names(self.preset).iter().map(|(n, _)| *n).collect();
        for name in &self.hard_fail {
            if !known.contains(name.as_str()) {
                problems.push(format!(
                    "hard_fail: {name:?} is not a check of {} (known: {})",
                    self.preset,
                    known.iter().copied().collect::<Vec<_>>().join(", ")
                ));
            }
        }
        problems
    }
}
