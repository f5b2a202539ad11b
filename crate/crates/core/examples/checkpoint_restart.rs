//! Writes a binary checkpoint mid-run, reads it back and continues. The two
//! legs land on the same state as one uninterrupted run.
//!
//!     cargo run --release --example checkpoint_restart

use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::experiments::{read_checkpoint, write_checkpoint};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 1024, 128.0)?;
    let params = ModelParams::new(1, 6.0, Sign::Defocusing)?;
    let cfg = StepperConfig::fixed(0.01);
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0] / 4.0).exp(), 0.0));

    let dir = std::env::temp_dir().join(format!("dmnls-restart-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("half.ckp");
    let first = evolve(&u0, &params, &cfg, 1.0, &[1.0])?;
    write_checkpoint(&path, first.final_state.time, &first.final_state.field)?;
    let restored = read_checkpoint(&path)?;
    let second = evolve(&restored.field, &params, &cfg, 1.0, &[1.0])?;
    let whole = evolve(&u0, &params, &cfg, 2.0, &[2.0])?;

    let gap = second.final_state.field.sub(&whole.final_state.field).l2_norm();
    println!(
        "checkpoint {} ({} bytes) at t = {}",
        path.display(),
        std::fs::metadata(&path)?.len(),
        restored.time
    );
    println!("two legs vs one run: {gap:.3e}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
