//! Free Schrödinger flow of a Gaussian against the closed form
//! `e^{it\Delta} e^{-x^2/2} = (1+2it)^{-1/2} e^{-x^2/(2(1+2it))}`.
//!
//!     cargo run --example free_propagation

use dmnls::spectral::{free_propagate, galilean_apply, ComplexField, Grid};
use num_complex::Complex64;

fn main() -> dmnls::Result<()> {
    let grid = Grid::new(1, 2048, 200.0)?;
    let u0 = ComplexField::from_fn(&grid, |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "max error", "mass", "||J(t)u||");
    for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let u = free_propagate(&u0, t)?;
        let z = Complex64::new(1.0, 2.0 * t);
        let exact = ComplexField::from_fn(&grid, |x| (-x[0] * x[0] / (2.0 * z)).exp() / z.sqrt());
        let err = u
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        // ||J(t) e^{it\Delta} u0|| = ||x u0|| for every t
        let ju = galilean_apply(&u, t)?.remove(0).l2_norm();
        println!("{t:>6.2} {err:>12.3e} {:>12.9} {ju:>12.9}", u.mass());
    }
    Ok(())
}
