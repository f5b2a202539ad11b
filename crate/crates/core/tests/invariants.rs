use std::sync::Arc;

use dmnls::dynamics::{dmnls_nonlinearity, ModelParams, Sign};
use dmnls::experiments::{float, read_checkpoint, write_checkpoint};
use dmnls::exponents::{admissible, emitted_pairs, exponent_report, scaling_residuals};
use dmnls::spectral::{free_propagate, ComplexField, Grid};
use num_complex::Complex64;
use proptest::prelude::*;

/// A smooth localized field: a sum of three modulated Gaussians.
fn packet(g: &Arc<Grid>, coeffs: &[(f64, f64, f64, f64)]) -> ComplexField {
    ComplexField::from_fn(g, |x| {
        coeffs
            .iter()
            .map(|&(a, c, k, w)| Complex64::from_polar(a * (-(x[0] - c).powi(2) / (w * w)).exp(), k * x[0]))
            .sum()
    })
}

fn packets() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((0.1..1.5f64, -4.0..4.0f64, -2.0..2.0f64, 0.8..3.0f64), 1..=3)
}

fn grid() -> Arc<Grid> {
    Grid::new(1, 512, 64.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn free_flow_is_unitary_group(c in packets(), s in -3.0..3.0f64, t in -3.0..3.0f64) {
        let u = packet(&grid(), &c);
        let us = free_propagate(&u, s).unwrap();
        prop_assert!((us.l2_norm() - u.l2_norm()).abs() < 1e-12 * u.l2_norm());
        let two_step = free_propagate(&us, t).unwrap();
        let one_step = free_propagate(&u, s + t).unwrap();
        prop_assert!(two_step.sub(&one_step).l2_norm() < 1e-12 * u.l2_norm());
        let back = free_propagate(&us, -s).unwrap();
        prop_assert!(back.sub(&u).l2_norm() < 1e-12 * u.l2_norm());
    }

    #[test]
    fn nonlinearity_is_gauge_covariant(c in packets(), theta in 0.0..6.3f64, p in 1.0..8.0f64) {
        let u = packet(&grid(), &c);
        let params = ModelParams::new(1, p, Sign::Defocusing).unwrap();
        let rot = Complex64::from_polar(1.0, theta);
        let lhs = dmnls_nonlinearity(&u.scale(rot), &params).unwrap();
        let rhs = dmnls_nonlinearity(&u, &params).unwrap().scale(rot);
        prop_assert!(lhs.sub(&rhs).l2_norm() <= 1e-12 * rhs.l2_norm().max(1e-300));
    }

    #[test]
    fn nonlinearity_pairs_to_a_real_number(c in packets(), p in 1.0..8.0f64) {
        // <u, N(u)> = sum_j w_j || e^{i s_j Delta} u ||_{p+2}^{p+2} is real and positive.
        let u = packet(&grid(), &c);
        let params = ModelParams::new(1, p, Sign::Focusing).unwrap();
        let z = u.inner(&dmnls_nonlinearity(&u, &params).unwrap());
        prop_assert!(z.re > 0.0);
        prop_assert!(z.im.abs() < 1e-12 * z.re);
    }

    #[test]
    fn nonlinearity_is_homogeneous(c in packets(), lambda in 0.1..3.0f64, p in 1.0..8.0f64) {
        let u = packet(&grid(), &c);
        let params = ModelParams::new(1, p, Sign::Defocusing).unwrap();
        let lhs = dmnls_nonlinearity(&u.scale(Complex64::new(lambda, 0.0)), &params).unwrap();
        let rhs = dmnls_nonlinearity(&u, &params).unwrap().scale(Complex64::new(lambda.powf(p + 1.0), 0.0));
        prop_assert!(lhs.sub(&rhs).l2_norm() <= 1e-12 * rhs.l2_norm());
    }

    #[test]
    fn checkpoint_round_trips_bit_exact(
        values in prop::collection::vec((any::<f64>(), any::<f64>()), 16),
        time in any::<f64>(),
    ) {
        let g = Grid::new(1, 16, 3.0).unwrap();
        let field = ComplexField::from_values(&g, values.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        prop_assume!(field.is_ok());
        let field = field.unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.ckp");
        write_checkpoint(&path, time, &field).unwrap();
        let back = read_checkpoint(&path).unwrap();
        prop_assert_eq!(back.time.to_bits(), time.to_bits());
        for (a, b) in back.field.values().iter().zip(field.values()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn csv_float_text_round_trips(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        prop_assert_eq!(float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn emitted_pairs_obey_scaling(d in 1usize..=4, p in 0.05..12.0f64) {
        let report = exponent_report(d, p);
        prop_assert!((report.s_c + report.gamma).abs() < 1e-12);
        for (label, q, r) in emitted_pairs(&report) {
            prop_assert!(admissible(q, r, d), "{} ({}, {})", label, q, r);
        }
        for (label, res) in scaling_residuals(&report) {
            prop_assert!(res.abs() < 1e-12, "{} = {}", label, res);
        }
    }
}
