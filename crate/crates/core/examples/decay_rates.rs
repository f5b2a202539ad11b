//! Log-log fits of `||J(t)u||` and `||w||_{L^{p+2}}` for defocusing `p = 6`,
//! next to the predicted exponents.
//!
//!     cargo run --release --example decay_rates

use dmnls::diagnostics::{decay_fit, record, DecayQuantity};
use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::exponents::exponent_report;
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 4096, 1024.0)?;
    let p = 6.0;
    let params = ModelParams::new(1, p, Sign::Defocusing)?;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0] / 36.0).exp(), 0.0));
    let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.5).collect();
    let traj = evolve(&u0, &params, &StepperConfig::fixed(0.01), 50.0, &times)?;
    let series = record(&traj, &params)?;
    let rep = exponent_report(1, p);
    let ju = decay_fit(&series, DecayQuantity::JuNorm, (5.0, 50.0))?;
    let w = decay_fit(&series, DecayQuantity::WNormP2, (5.0, 50.0))?;
    println!(
        "||Ju||  slope {:+.4} (r^2 {:.4}), bound {:?}",
        ju.exponent, ju.r_squared, rep.decay_c1
    );
    println!(
        "||w||   slope {:+.4} (r^2 {:.4}), bound {:?}",
        w.exponent, w.r_squared, rep.decay_rate_w
    );
    Ok(())
}
