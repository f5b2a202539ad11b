//! Runs one config file through the library, as `dmnls run` does, and lists
//! the checks and files.
//!
//!     cargo run --release --example run_preset -- examples/configs/pce_check.toml

use std::path::PathBuf;

use dmnls::experiments::run_file;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("examples/configs/free_sanity.toml"), PathBuf::from);
    let outcome = match run_file(&path) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    for c in &outcome.summary.checks {
        let value = c.value.map_or(String::new(), |v| format!("{v:.4e}"));
        println!(
            "{:<5} {:<32} {value:>12}  {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.criterion
        );
    }
    println!("files in {}:", outcome.output_dir.display());
    for f in &outcome.manifest.files {
        println!("  {f}");
    }
    std::process::exit(outcome.exit.code());
}
