//! Cauchy differences of the profile `e^{-it\Delta}u(t)` for small data,
//! intercritical `p = 5` and mass-subcritical `p = 3`.
//!
//!     cargo run --release --example small_data_scattering

use dmnls::diagnostics::{scattering_profile, ScatteringNorm};
use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 2048, 256.0)?;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new(0.05 * (-x[0] * x[0] / 64.0).exp(), 0.0));
    let times: Vec<f64> = (0..=50).map(f64::from).collect();
    for (p, critical) in [
        (5.0, ScatteringNorm::CriticalSobolev),
        (3.0, ScatteringNorm::CriticalWeight),
    ] {
        let params = ModelParams::new(1, p, Sign::Defocusing)?;
        let traj = evolve(&u0, &params, &StepperConfig::fixed(0.02), 50.0, &times)?;
        let report = scattering_profile(&traj, &[ScatteringNorm::L2, critical])?;
        for s in &report.series {
            println!(
                "p = {p}: {:?} monotone after t = 5: {}, last difference / data norm {:.3e}",
                s.norm,
                s.monotone_after(&report.times, 5.0),
                s.last_relative()
            );
        }
    }
    Ok(())
}
