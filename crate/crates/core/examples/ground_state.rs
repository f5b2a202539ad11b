//! Maximizes the Gagliardo–Nirenberg-type quotient for `p = 10` from two
//! initial guesses and prints the threshold quantities.
//!
//!     cargo run --release --example ground_state

use dmnls::ground_state::{optimize, GroundStateConfig};
use dmnls::spectral::{ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 512, 64.0)?;
    let cfg = GroundStateConfig::default();
    let inits = [
        (
            "gaussian",
            ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0)),
        ),
        (
            "sech",
            ComplexField::from_fn(&grid, |x| Complex64::new(1.0 / (1.5 * x[0]).cosh(), 0.0)),
        ),
    ];
    for (name, init) in &inits {
        let r = optimize(init, 10.0, &cfg)?;
        println!("{name}:");
        println!("  quotient        {:.12}", r.quotient_value);
        println!("  iterations      {} (converged {})", r.iterations, r.converged);
        println!("  EL residual     {:.3e}", r.el_residual);
        println!("  M(Q)            {:.6}", r.mass_q);
        println!("  threshold       {:.6}", r.threshold_value);
        println!("  sigma tail      {:.3e}", r.tail_estimate);
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
