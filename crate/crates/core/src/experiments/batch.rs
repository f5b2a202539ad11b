use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::config::{parse_config, ConfigError, RunConfig};
use super::{run, ExitStatus, RunOutcome};

/// Environment variable capping the number of concurrent runs.
pub const WORKERS_ENV: &str = "DMNLS_WORKERS";

/// Workers for `jobs` runs: the value of [`WORKERS_ENV`] if it is a
/// positive integer, otherwise the available parallelism, never more than
/// `jobs`.
pub fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    cap.min(jobs).max(1)
}

#[derive(Debug)]
pub struct BatchEntry {
    pub config_path: PathBuf,
    pub result: Result<RunOutcome, ConfigError>,
}

impl BatchEntry {
    pub fn exit(&self) -> ExitStatus {
        match &self.result {
            Ok(o) => o.exit,
            Err(_) => ExitStatus::ConfigError,
        }
    }
}

#[derive(Debug)]
pub struct BatchReport {
    pub workers: usize,
    pub entries: Vec<BatchEntry>,
}

impl BatchReport {
    /// The worst exit status over all entries.
    pub fn exit(&self) -> ExitStatus {
        self.entries
            .iter()
            .map(BatchEntry::exit)
            .max()
            .unwrap_or(ExitStatus::Pass)
    }
}

/// Runs every `*.toml` in `dir` (sorted by name), one worker per run.
/// Configs that fail to parse are reported and skipped. Two configs sharing
/// an output directory are both rejected.
pub fn run_batch(dir: &Path) -> Result<BatchReport, ConfigError> {
    let listing = std::fs::read_dir(dir).map_err(|e| ConfigError {
        problems: vec![format!("cannot list {}: {e}", dir.display())],
    })?;
    let mut paths: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(ConfigError {
            problems: vec![format!("no .toml configs in {}", dir.display())],
        });
    }

    let mut parsed: Vec<(PathBuf, Result<RunConfig, ConfigError>)> =
        paths.into_iter().map(|p| (p.clone(), parse_config(&p))).collect();
    let mut owners: BTreeMap<PathBuf, Vec<usize>> = BTreeMap::new();
    for (i, (_, r)) in parsed.iter().enumerate() {
        if let Ok(c) = r {
            owners.entry(c.output_dir.clone()).or_default().push(i);
        }
    }
    for (out, idx) in owners.into_iter().filter(|(_, v)| v.len() > 1) {
        let names: Vec<String> = idx.iter().map(|&i| parsed[i].0.display().to_string()).collect();
        for &i in &idx {
            parsed[i].1 = Err(ConfigError {
                problems: vec![format!(
                    "output_dir {} is shared by {}",
                    out.display(),
                    names.join(", ")
                )],
            });
        }
    }

    let jobs: Vec<usize> = (0..parsed.len()).filter(|&i| parsed[i].1.is_ok()).collect();
    let workers = worker_count(jobs.len());
    let results: Mutex<BTreeMap<usize, RunOutcome>> = Mutex::new(BTreeMap::new());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&i) = jobs.get(k) else { break };
                let Ok(config) = &parsed[i].1 else { continue };
                let outcome = run(config);
                results.lock().expect("no worker panicked").insert(i, outcome);
            });
        }
    });
    let mut results = results.into_inner().expect("no worker panicked");
    let entries = parsed
        .into_iter()
        .enumerate()
        .map(|(i, (config_path, parsed))| BatchEntry {
            config_path,
            result: parsed.map(|_| results.remove(&i).expect("every parsed config ran")),
        })
        .collect();
    Ok(BatchReport { workers, entries })
}
