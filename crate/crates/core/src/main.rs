use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dmnls::experiments::{run_batch, run_file, ExitStatus, Preset, RunOutcome, WORKERS_ENV};
use dmnls::exponents::exponent_report;

#[derive(Parser)]
#[command(version, about = "Pseudo-spectral verification runs for the dispersion-managed NLS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one config file
    Run { config: PathBuf },
    /// Print the exponent report of (d, p) as JSON
    Exponents {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
    },
    /// Run a ground_state config
    Groundstate { config: PathBuf },
    /// Run every *.toml in a directory in parallel
    #[command(after_help = format!("Set {WORKERS_ENV} to cap the number of concurrent runs."))]
    Batch { dir: PathBuf },
}

fn report(outcome: &RunOutcome) {
    for c in &outcome.summary.checks {
        let verdict = match (c.passed, c.hard) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "fail (soft)",
        };
        let value = c.value.map(|v| format!("{v:.6e}")).unwrap_or_default();
        println!("  {verdict:<11} {:<32} {value:<14} {}", c.name, c.criterion);
    }
    if let Some(e) = &outcome.manifest.error {
        let stage = outcome.manifest.failing_stage.as_deref().unwrap_or("?");
        eprintln!("  error in stage {stage}: {e}");
    }
    println!("  -> {} ({:?})", outcome.output_dir.display(), outcome.exit);
}

fn run_one(config: &Path, require: Option<Preset>) -> ExitStatus {
    if let Some(preset) = require {
        match dmnls::experiments::parse_config(config) {
            Ok(c) if c.preset != preset => {
                eprintln!("{}: preset is {}, expected {preset}", config.display(), c.preset);
                return ExitStatus::ConfigError;
            }
            Ok(_) => {}
            Err(e) => {
                eprintln!("{}: {e}", config.display());
                return ExitStatus::ConfigError;
            }
        }
    }
    match run_file(config) {
        Ok(outcome) => {
            println!("{} [{}]", config.display(), outcome.summary.preset);
            report(&outcome);
            outcome.exit
        }
        Err(e) => {
            eprintln!("{}: {e}", config.display());
            ExitStatus::ConfigError
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Run { config } => run_one(&config, None),
        Command::Groundstate { config } => run_one(&config, Some(Preset::GroundState)),
        Command::Exponents { d, p } => {
            if d == 0 || !(p > 0.0 && p.is_finite()) {
                eprintln!("need d >= 1 and a positive finite p, got d = {d}, p = {p}");
                ExitStatus::ConfigError
            } else {
                let rep = exponent_report(d, p);
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
                ExitStatus::Pass
            }
        }
        Command::Batch { dir } => match run_batch(&dir) {
            Ok(batch) => {
                println!("{} configs, {} workers", batch.entries.len(), batch.workers);
                for entry in &batch.entries {
                    match &entry.result {
                        Ok(outcome) => {
                            println!("{} [{}]", entry.config_path.display(), outcome.summary.preset);
                            report(outcome);
                        }
                        Err(e) => eprintln!("{}: {e}", entry.config_path.display()),
                    }
                }
                batch.exit()
            }
            Err(e) => {
                eprintln!("{e}");
                ExitStatus::ConfigError
            }
        },
    };
    ExitCode::from(status.code() as u8)
}
