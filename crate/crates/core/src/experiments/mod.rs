//! Config files, preset pipelines and run artifacts.
//!
//! A run reads a TOML config, executes the preset pipeline and leaves in
//! `output_dir` the CSV series, a `summary.json` with every check and a
//! `manifest.json` written last. Files are produced in a private staging
//! directory that replaces `output_dir` once the manifest is in place.

mod batch;
mod config;
mod output;
mod presets;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub use batch::{run_batch, worker_count, BatchEntry, BatchReport, WORKERS_ENV};
pub use config::{
    parse_config, parse_config_str, AnalysisConfig, Checkpoints, ConfigError, DichotomyConfig, ExponentsSection,
    GridConfig, GroundStateSection, InitialData, ModelConfig, Preset, RunConfig, Thresholds,
};
pub use output::{
    float, read_checkpoint, read_checkpoint_on, read_csv, read_manifest, read_series, sha256_hex, write_checkpoint,
    write_columns, write_csv, write_json, write_series, ManifestStatus, NumericTable, RunManifest, CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
};
pub use presets::{check_names, gradient_fd_error, initial_field, preset_defaults};

use crate::diagnostics::DiagnosticsTimeSeries;
use crate::error::{Error, Result};
use crate::spectral::ComplexField;

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Pass = 0,
    CheckFail = 1,
    ConfigError = 2,
    RuntimeError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Whether a failure makes the run exit nonzero.
    pub hard: bool,
    /// The measured number, when there is one.
    pub value: Option<f64>,
    pub criterion: String,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub preset: Preset,
    pub status: ManifestStatus,
    pub checks: Vec<Check>,
    pub details: serde_json::Map<String, serde_json::Value>,
}

impl RunSummary {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// What [`run`] hands back besides the files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit: ExitStatus,
    pub output_dir: PathBuf,
    pub manifest: RunManifest,
    pub summary: RunSummary,
}

/// Working state of a pipeline: where files go and what has been checked.
pub(crate) struct Ctx<'a> {
    cfg: &'a RunConfig,
    dir: PathBuf,
    files: Vec<String>,
    stage: &'static str,
    checks: Vec<Check>,
    details: serde_json::Map<String, serde_json::Value>,
}

impl<'a> Ctx<'a> {
    fn stage(&mut self, stage: &'static str) {
        self.stage = stage;
    }

    fn add_file(&mut self, name: &str) -> PathBuf {
        debug_assert!(!self.files.iter().any(|f| f == name), "{name} written twice");
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn check(&mut self, name: &str, passed: bool, value: f64, criterion: String) {
        let hard = self.cfg.hard_fail.iter().any(|h| h == name);
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            hard,
            value: value.is_finite().then_some(value),
            criterion,
        });
    }

    fn check_below(&mut self, name: &str, value: f64, limit: f64) {
        self.check(name, value < limit, value, format!("< {limit:e}"));
    }

    fn check_at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.check(name, value <= limit, value, format!("<= {limit}"));
    }

    fn detail(&mut self, key: &str, value: serde_json::Value) {
        self.details.insert(key.to_string(), value);
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let path = self.add_file(name);
        write_csv(&path, header, rows)
    }

    fn columns(&mut self, name: &str, header: &[&str], columns: &[&[f64]]) -> Result<()> {
        let path = self.add_file(name);
        write_columns(&path, header, columns)
    }

    fn series(&mut self, name: &str, series: &DiagnosticsTimeSeries) -> Result<()> {
        let path = self.add_file(name);
        write_series(&path, series)
    }

    fn checkpoint(&mut self, name: &str, field: &ComplexField, time: f64) -> Result<()> {
        let path = self.add_file(name);
        write_checkpoint(&path, time, field)
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.add_file(name);
        write_json(&path, value)
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

fn staging_dir(output_dir: &Path) -> PathBuf {
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let name = output_dir
        .file_name()
        .map_or("run".into(), |n| n.to_string_lossy().into_owned());
    let tag = format!(
        ".{name}.partial-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    );
    output_dir.with_file_name(tag)
}

/// Moves the staged tree into place. An existing `output_dir` is replaced
/// only if it holds an earlier run (has a manifest) or is empty.
fn publish(staging: &Path, output_dir: &Path) -> Result<()> {
    if output_dir.exists() {
        let earlier_run = output_dir.join("manifest.json").is_file();
        let empty = fs::read_dir(output_dir)?.next().is_none();
        if !(earlier_run || empty) {
            return Err(Error::Io(format!(
                "{} exists and is not the output of an earlier run",
                output_dir.display()
            )));
        }
        fs::remove_dir_all(output_dir)?;
    }
    fs::rename(staging, output_dir)?;
    Ok(())
}

/// Runs a validated config and writes its artifacts.
pub fn run(config: &RunConfig) -> RunOutcome {
    let started = unix_now();
    let output_dir = config.output_dir.clone();
    let staging = staging_dir(&output_dir);
    let mut ctx = Ctx {
        cfg: config,
        dir: staging.clone(),
        files: Vec::new(),
        stage: "setup",
        checks: Vec::new(),
        details: serde_json::Map::new(),
    };
    let mut result = output_dir
        .parent()
        .map_or(Ok(()), fs::create_dir_all)
        .and_then(|_| fs::create_dir_all(&staging))
        .map_err(Error::from);
    if result.is_ok() {
        result = presets::run_pipeline(&mut ctx);
    }

    let failed: Vec<String> = ctx
        .checks
        .iter()
        .filter(|c| !c.passed && c.hard)
        .map(|c| c.name.clone())
        .collect();
    let mut error = result.err().map(|e| e.to_string());
    let mut failing_stage = error.as_ref().map(|_| ctx.stage.to_string());
    let status = match (&error, failed.is_empty()) {
        (Some(_), _) => ManifestStatus::RuntimeError,
        (None, true) => ManifestStatus::Pass,
        (None, false) => ManifestStatus::CheckFail,
    };
    let summary = RunSummary {
        preset: config.preset,
        status,
        checks: ctx.checks.clone(),
        details: ctx.details.clone(),
    };
    if staging.is_dir() {
        if let Err(e) = ctx.json("summary.json", &summary) {
            error.get_or_insert(e.to_string());
            failing_stage.get_or_insert("write".into());
        }
    }
    let mut manifest = RunManifest {
        preset: config.preset.name().to_string(),
        config_hash: sha256_hex(&config.to_toml()),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix: started,
        finished_unix: unix_now(),
        status,
        exit_code: 0,
        failing_stage,
        error,
        failed_checks: failed,
        files: ctx
            .files
            .iter()
            .filter(|f| ctx.dir.join(f).is_file())
            .cloned()
            .collect(),
        config: serde_json::to_value(config).unwrap_or_default(),
    };
    if manifest.error.is_some() {
        manifest.status = ManifestStatus::RuntimeError;
    }
    manifest.exit_code = exit_for(manifest.status).code();
    let finalize = write_json(&staging.join("manifest.json"), &manifest).and_then(|_| publish(&staging, &output_dir));
    if let Err(e) = finalize {
        manifest.error = Some(format!("could not finalize the run directory: {e}"));
        manifest.failing_stage = Some("publish".into());
        manifest.status = ManifestStatus::RuntimeError;
        manifest.exit_code = ExitStatus::RuntimeError.code();
    }
    RunOutcome {
        exit: exit_for(manifest.status),
        output_dir,
        manifest,
        summary,
    }
}

fn exit_for(status: ManifestStatus) -> ExitStatus {
    match status {
        ManifestStatus::Pass => ExitStatus::Pass,
        ManifestStatus::CheckFail => ExitStatus::CheckFail,
        ManifestStatus::RuntimeError => ExitStatus::RuntimeError,
    }
}

/// Parses and runs a config file. Config problems give
/// [`ExitStatus::ConfigError`] without touching the output directory.
pub fn run_file(path: &Path) -> std::result::Result<RunOutcome, ConfigError> {
    let config = parse_config(path)?;
    Ok(run(&config))
}
