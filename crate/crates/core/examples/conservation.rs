//! Mass and energy drift of a defocusing `p = 6` run, written as a
//! diagnostics CSV.
//!
//!     cargo run --release --example conservation -- [out.csv]

use std::path::PathBuf;

use dmnls::diagnostics::record;
use dmnls::dynamics::{evolve, ModelParams, Sign, StepperConfig};
use dmnls::experiments::write_series;
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("conservation.csv"), PathBuf::from);
    let grid = Grid::new(1, 2048, 256.0)?;
    let params = ModelParams::new(1, 6.0, Sign::Defocusing)?;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0] / 4.0).exp(), 0.0));
    let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
    let traj = evolve(&u0, &params, &StepperConfig::fixed(0.01), 10.0, &times)?;
    let series = record(&traj, &params)?;
    write_series(&out, &series)?;
    println!("status        {:?}", traj.status);
    println!("mass drift    {:.3e}", series.max_relative_drift(|r| r.mass));
    println!(
        "energy drift  {:.3e}",
        series.max_relative_drift(|r| r.energy_defocusing)
    );
    println!("series        {}", out.display());
    Ok(())
}
