//! Order of the time stepper on the exact plane wave
//! `u = A e^{ikx} e^{-i(k^2 + c|A|^p)t}`.
//!
//!     cargo run --release --example plane_wave_convergence

use std::f64::consts::PI;

use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let l = 256.0;
    let grid = Grid::new(1, 2048, l)?;
    let (a, k, t_final) = (0.5f64, 2.0 * PI * 8.0 / l, 1.0);
    let params = ModelParams::new(1, 4.0, Sign::Defocusing)?;
    let omega = k * k + params.coefficient() * a.powi(4);
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::from_polar(a, k * x[0]));
    let exact = ComplexField::from_fn(&grid, |x| Complex64::from_polar(a, k * x[0] - omega * t_final));

    let mut previous: Option<f64> = None;
    println!("{:>8} {:>12} {:>8}", "dt", "rel error", "ratio");
    for dt in [0.5, 0.25, 0.125, 0.0625, 1e-3] {
        // the wave fills the box, so the boundary-mass monitor has to be off
        let cfg = StepperConfig {
            boundary_threshold: 1.0,
            ..StepperConfig::fixed(dt)
        };
        let traj = evolve(&u0, &params, &cfg, t_final, &[t_final])?;
        let err = traj.final_state.field.sub(&exact).l2_norm() / exact.l2_norm();
        let ratio = previous.map_or(String::new(), |p| format!("{:.3}", p / err));
        println!("{dt:>8} {err:>12.3e} {ratio:>8}");
        previous = Some(err);
    }
    Ok(())
}
