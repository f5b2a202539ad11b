use std::f64::consts::PI;
use std::sync::Arc;

use dmnls::dynamics::{dmnls_nonlinearity, evolve, ModelParams, Sign, StepperConfig};
use dmnls::spectral::{fractional_galilean, free_propagate, galilean_apply, norm, ComplexField, Grid, NormSpec};
use num_complex::Complex64;

fn gaussian(g: &Arc<Grid>, a: f64, w: f64) -> ComplexField {
    ComplexField::from_fn(g, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new(a * (-r2 / (w * w)).exp(), 0.0)
    })
}

fn max_abs_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn rel_l2(a: &ComplexField, b: &ComplexField) -> f64 {
    a.sub(b).l2_norm() / b.l2_norm()
}

/// Translation by `shift` along the first axis, done spectrally.
fn translate(u: &ComplexField, shift: f64) -> ComplexField {
    let grid = u.grid();
    let mut c = u.to_spectral();
    for (z, &k) in c.iter_mut().zip(grid.wavenumbers(0)) {
        *z *= Complex64::from_polar(1.0, -k * shift);
    }
    ComplexField::from_spectral(grid, c)
}

#[test]
fn free_evolution_of_gaussian_matches_closed_form() {
    let g = Grid::new(1, 2048, 200.0).unwrap();
    let u0 = ComplexField::from_fn(&g, |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
    for t in [0.5, 1.0, 3.0, -2.0] {
        let u = free_propagate(&u0, t).unwrap();
        let z = Complex64::new(1.0, 2.0 * t);
        let exact = ComplexField::from_fn(&g, |x| (-x[0] * x[0] / (2.0 * z)).exp() / z.sqrt());
        assert!(max_abs_diff(&u, &exact) < 1e-12, "t = {t}");
    }
}

#[test]
fn free_evolution_in_two_dimensions_factorizes() {
    let g = Grid::new(2, 256, 100.0).unwrap();
    let u0 = gaussian(&g, 1.0, 2f64.sqrt());
    let t = 1.5;
    let u = free_propagate(&u0, t).unwrap();
    let z = Complex64::new(1.0, 2.0 * t);
    let exact = ComplexField::from_fn(&g, |x| (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * z)).exp() / z);
    assert!(max_abs_diff(&u, &exact) < 1e-12);
}

#[test]
fn l4_norm_of_gaussian() {
    let g = Grid::new(1, 512, 40.0).unwrap();
    let u = gaussian(&g, 1.0, 1.0);
    let l4 = norm(&u, NormSpec::Lr { r: 4.0 }).unwrap();
    assert!((l4 - (PI / 4.0).powf(0.125)).abs() < 1e-13);
    let l2 = norm(&u, NormSpec::Lr { r: 2.0 }).unwrap();
    assert!((l2 - (PI / 2.0).powf(0.25)).abs() < 1e-13);
    let linf = norm(&u, NormSpec::Lr { r: f64::INFINITY }).unwrap();
    assert!((linf - 1.0).abs() < 1e-15);
}

#[test]
fn sobolev_norm_of_gaussian() {
    // ||u||_{H^1}^2 = ||u||^2 + ||u'||^2 = sqrt(pi/2) (1 + 1) for exp(-x^2).
    let g = Grid::new(1, 512, 40.0).unwrap();
    let u = gaussian(&g, 1.0, 1.0);
    let h1 = norm(&u, NormSpec::SobolevHs { s: 1.0 }).unwrap();
    assert!((h1 - (2.0 * (PI / 2.0).sqrt()).sqrt()).abs() < 1e-12);
    let w = norm(&u, NormSpec::WeightedL2 { gamma: 1.0 }).unwrap();
    assert!((w - ((PI / 2.0).sqrt() / 4.0).sqrt()).abs() < 1e-12);
}

#[test]
fn galilean_operator_conjugates_position() {
    let g = Grid::new(1, 1024, 128.0).unwrap();
    let u0 = gaussian(&g, 1.0, 2.0);
    let xu0 = ComplexField::from_fn(&g, |x| Complex64::new(x[0] * (-x[0] * x[0] / 4.0).exp(), 0.0));
    for t in [0.0, 0.7, 2.0, -1.3] {
        let u = free_propagate(&u0, t).unwrap();
        let ju = galilean_apply(&u, t).unwrap().remove(0);
        let expect = free_propagate(&xu0, t).unwrap();
        assert!(max_abs_diff(&ju, &expect) < 1e-10, "t = {t}");
    }
}

fn fractional_gap(n: usize, l: f64, gamma: f64, t: f64) -> f64 {
    let g = Grid::new(1, n, l).unwrap();
    let u0 = gaussian(&g, 1.0, 1.5);
    let w = norm(&u0, NormSpec::WeightedL2 { gamma }).unwrap();
    let u = free_propagate(&u0, t).unwrap();
    (fractional_galilean(&u, t, gamma).unwrap().l2_norm() - w).abs() / w
}

#[test]
fn fractional_galilean_norm_is_weighted_norm_of_data() {
    // ||J^gamma(t) e^{it Delta} u0|| = || |x|^gamma u0 ||. For gamma < 1 the
    // symbol |xi|^gamma is not smooth at 0, so the lattice sum converges
    // only algebraically as the box grows.
    for t in [1.0, 3.0] {
        assert!(fractional_gap(2048, 128.0, 1.0, t) < 1e-10, "t = {t}");
        for gamma in [0.3, 0.5] {
            let coarse = fractional_gap(2048, 128.0, gamma, t);
            let fine = fractional_gap(4096, 256.0, gamma, t);
            assert!(coarse < 3e-2, "gamma = {gamma}, t = {t}");
            assert!(fine < 0.6 * coarse, "gamma = {gamma}, t = {t}: {coarse} -> {fine}");
        }
    }
    let g = Grid::new(1, 2048, 128.0).unwrap();
    let u = free_propagate(&gaussian(&g, 1.0, 1.5), 2.0).unwrap();
    let j1 = galilean_apply(&u, 2.0).unwrap().remove(0).l2_norm();
    let f1 = fractional_galilean(&u, 2.0, 1.0).unwrap().l2_norm();
    assert!((j1 - f1).abs() < 1e-9 * j1);
}

#[test]
fn boosted_gaussian_two_routes_agree() {
    // Boosting the data by exp(i v x / 2) must give the boost of the
    // evolved solution: u_v(t, x) = exp(i (v x / 2 - v^2 t / 4)) u(t, x - v t).
    let l = 64.0;
    let g = Grid::new(1, 1024, l).unwrap();
    let half_v = 2.0 * PI * 4.0 / l;
    let v = 2.0 * half_v;
    let t = 1.0;
    let params = ModelParams::new(1, 4.0, Sign::Defocusing).unwrap();
    let u0 = gaussian(&g, 1.0, 1.0);
    let boosted0 = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, half_v * x[0]) * (-x[0] * x[0]).exp());
    let cfg = StepperConfig::fixed(1e-3);
    let direct = evolve(&boosted0, &params, &cfg, t, &[t]).unwrap().final_state.field;
    let plain = evolve(&u0, &params, &cfg, t, &[t]).unwrap().final_state.field;
    let shifted = translate(&plain, v * t);
    let mut via_boost = shifted.clone();
    let x = g.positions(0).to_vec();
    for (z, xv) in via_boost.values_mut().iter_mut().zip(x) {
        *z *= Complex64::from_polar(1.0, half_v * xv - v * v * t / 4.0);
    }
    assert!(rel_l2(&direct, &via_boost) < 1e-9, "{}", rel_l2(&direct, &via_boost));
}

#[test]
fn sigma_rule_converges_on_smooth_data() {
    let g = Grid::new(1, 1024, 128.0).unwrap();
    let u = gaussian(&g, 1.0, 4.0);
    let n = |nodes| {
        let params = ModelParams::with_node_count(1, 6.0, Sign::Defocusing, nodes).unwrap();
        dmnls_nonlinearity(&u, &params).unwrap()
    };
    let reference = n(64);
    assert!(
        rel_l2(&n(8), &reference) < 1e-6,
        "{} {}",
        rel_l2(&n(8), &reference),
        rel_l2(&n(16), &reference)
    );
    assert!(rel_l2(&n(16), &reference) < 1e-10);
}

#[test]
fn nonlinearity_of_plane_wave_is_pointwise_power() {
    let l = 2.0 * PI;
    let g = Grid::new(1, 64, l).unwrap();
    let a = 0.7;
    let u = ComplexField::from_fn(&g, |x| Complex64::from_polar(a, 3.0 * x[0]));
    let params = ModelParams::new(1, 4.0, Sign::Focusing).unwrap();
    let nu = dmnls_nonlinearity(&u, &params).unwrap();
    let expect = u.scale(Complex64::new(a.powi(4), 0.0));
    assert!(max_abs_diff(&nu, &expect) < 1e-13);
}
