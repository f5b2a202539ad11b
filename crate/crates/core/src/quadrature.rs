//! Gauss–Legendre rules for the sigma integrals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A quadrature node on the sigma axis and its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub sigma: f64,
    pub weight: f64,
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre_reference(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature needs at least one node".into()));
    }
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    Ok(out)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule on `[0, 1]`; the weights sum to one.
pub fn gauss_legendre_unit(n: usize) -> Result<Vec<Node>> {
    Ok(gauss_legendre_reference(n)?
        .into_iter()
        .map(|(x, w)| Node {
            sigma: 0.5 * (x + 1.0),
            weight: 0.5 * w,
        })
        .collect())
}

/// Composite rule on `[a, b]`: `panels` equal panels, each with `per_panel`
/// Gauss–Legendre nodes.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, per_panel: usize) -> Result<Vec<Node>> {
    if !(b > a) || panels == 0 {
        return Err(Error::InvalidParameter(format!(
            "composite rule needs a < b and at least one panel, got [{a}, {b}] with {panels}"
        )));
    }
    let base = gauss_legendre_reference(per_panel)?;
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    for k in 0..panels {
        let lo = a + k as f64 * h;
        for &(x, w) in &base {
            nodes.push(Node {
                sigma: lo + 0.5 * h * (x + 1.0),
                weight: 0.5 * h * w,
            });
        }
    }
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 5, 8, 16, 33, 64] {
            let s: f64 = gauss_legendre_unit(n).unwrap().iter().map(|q| q.weight).sum();
            assert!((s - 1.0).abs() < 1e-14, "n = {n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let n = 16;
        let rule = gauss_legendre_unit(n).unwrap();
        for k in 0..(2 * n) {
            let approx: f64 = rule.iter().map(|q| q.weight * q.sigma.powi(k as i32)).sum();
            let exact = 1.0 / (k as f64 + 1.0);
            assert!((approx - exact).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn nodes_symmetric_about_midpoint() {
        let rule = gauss_legendre_unit(16).unwrap();
        for i in 0..16 {
            assert!((rule[i].sigma + rule[15 - i].sigma - 1.0).abs() < 1e-15);
            assert_eq!(rule[i].weight, rule[15 - i].weight);
        }
        assert!(rule.windows(2).all(|w| w[1].sigma > w[0].sigma));
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre_reference(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r[0].0 + x).abs() < 1e-15 && (r[1].0 - x).abs() < 1e-15);
        assert!((r[0].1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn composite_integrates_gaussian() {
        let rule = composite_gauss_legendre(-8.0, 8.0, 16, 8).unwrap();
        let s: f64 = rule.iter().map(|q| q.weight * (-q.sigma * q.sigma).exp()).sum();
        assert!((s - PI.sqrt()).abs() < 1e-12);
    }
}
