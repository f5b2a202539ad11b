//! Long-range `p = 1`: the overlap `Im <u(t), e^{it\Delta}psi>` keeps growing
//! and its derivative decays like `t^{-dp/2}`.
//!
//!     cargo run --release --example nonscattering

use dmnls::diagnostics::nonscattering_probe;
use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn gaussian(grid: &std::sync::Arc<Grid>, a: f64) -> ComplexField {
    ComplexField::from_fn(grid, |x| Complex64::new(a * (-x[0] * x[0] / 36.0).exp(), 0.0))
}

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 2048, 512.0)?;
    let params = ModelParams::new(1, 1.0, Sign::Defocusing)?;
    let times: Vec<f64> = (0..=100).map(f64::from).collect();
    let traj = evolve(
        &gaussian(&grid, 0.01),
        &params,
        &StepperConfig::fixed(0.05),
        100.0,
        &times,
    )?;
    let report = nonscattering_probe(&traj, &gaussian(&grid, 1.0), (10.0, 100.0))?;
    match &report.fit {
        Some(fit) => println!(
            "derivative exponent {:+.4} (predicted -0.5), r^2 {:.5}",
            fit.exponent, fit.r_squared
        ),
        None => println!("derivative changes sign, no fit"),
    }
    println!(
        "overlap strictly increasing on [10, 100]: {}",
        report.overlap_increasing
    );
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
