//! Focusing `p = 10` runs from `lambda e^{-x^2}` in both time directions.
//! Small `lambda` disperses; large `lambda` trips the gradient monitor.
//!
//!     cargo run --release --example blowup_dichotomy -- [lambda ...]

use dmnls::dynamics::{evolve, ModelParams, RunStatus, Sign, StepperConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let mut lambdas: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if lambdas.is_empty() {
        lambdas = vec![1.0, 2.0, 4.0];
    }
    let grid = Grid::new(1, 4096, 512.0)?;
    let params = ModelParams::new(1, 10.0, Sign::Focusing)?;
    let cfg = StepperConfig {
        blowup_gradient_factor: 10.0,
        boundary_threshold: 1e-4,
        ..StepperConfig::adaptive(1e-3, 1e-9)
    };
    for lambda in lambdas {
        let u0 = ComplexField::from_fn(&grid, |x| Complex64::new(lambda * (-x[0] * x[0]).exp(), 0.0));
        for t_final in [20.0, -20.0] {
            let traj = evolve(&u0, &params, &cfg, t_final, &[])?;
            let outcome = match traj.status {
                RunStatus::Completed => "completed".to_string(),
                RunStatus::BlowupDetected { time, reason } => format!("blowup at t = {time:.4} ({reason:?})"),
                RunStatus::InvalidatedBoundaryMass { time, fraction } => {
                    format!("boundary mass {fraction:.1e} at t = {time:.2}")
                }
            };
            println!(
                "lambda {lambda:<5} T {t_final:+}: {outcome}, {} steps accepted, {} rejected",
                traj.stats.accepted, traj.stats.rejected
            );
        }
    }
    Ok(())
}
