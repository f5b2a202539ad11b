//! Pseudoconformal energy identity with both boundary coefficients, and the
//! effect of halving the checkpoint spacing.
//!
//!     cargo run --release --example pce_identity

use dmnls::diagnostics::{compare_variants, record};
use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 2048, 256.0)?;
    let params = ModelParams::new(1, 6.0, Sign::Defocusing)?;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0] / 4.0).exp(), 0.0));
    let times: Vec<f64> = (0..=180).map(|k| k as f64 * 0.025).collect();
    let traj = evolve(&u0, &params, &StepperConfig::fixed(0.01), 4.5, &times)?;
    let series = record(&traj, &params)?;
    for stride in [1, 2] {
        let c = compare_variants(&series.subsample(stride), (1.0, 4.0))?;
        println!(
            "spacing {:.3}: 8(t+1) {:.3e}  8(2t+1) {:.3e}  selected {}  separation {:.1}",
            0.025 * stride as f64,
            c.t_plus_1.aggregate_relative_residual,
            c.two_t_plus_1.aggregate_relative_residual,
            c.selected.label(),
            c.separation
        );
    }
    Ok(())
}
