//! Modified time reversal for focusing `p = 10`: the forward run from
//! `e^{-i\Delta} conj(u_0)` equals `e^{-i\Delta} conj(u(-t))`.
//!
//!     cargo run --release --example time_reversal

use dmnls::diagnostics::{reversal_map, time_reversal_check};
use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 2048, 256.0)?;
    let params = ModelParams::new(1, 10.0, Sign::Focusing)?;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
    let cfg = StepperConfig::fixed(1e-3);
    let forward_times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    let backward_times: Vec<f64> = forward_times.iter().map(|t| -t).collect();
    let backward = evolve(&u0, &params, &cfg, -1.0, &backward_times)?;
    let forward = evolve(&reversal_map(&u0)?, &params, &cfg, 1.0, &forward_times)?;
    let report = time_reversal_check(&forward, &backward)?;
    println!("max field deviation  {:.3e}", report.max_field_deviation);
    println!("max energy deviation {:.3e}", report.max_energy_deviation);
    Ok(())
}
