//! Exponent arithmetic and regime classification for a power `p` in
//! dimension `d`.
//!
//! Interval endpoints are decided with an absolute snap tolerance of
//! [`BOUNDARY_TOLERANCE`]: a power within that distance of a critical
//! value is classified as lying on it.

use serde::{Deserialize, Serialize};

pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// `3 + sqrt(5)`, the lower end of the one-dimensional large-data
/// scattering range.
pub fn p0() -> f64 {
    3.0 + 5f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `p <= 2/d`
    LongRange,
    /// `2/d < p < 4/d`
    MassSubcritical,
    /// `p = 4/d`
    MassCritical,
    /// `4/d < p < 4/(d-2)` (all `p > 4/d` when `d <= 2`)
    Intercritical,
    /// `p = 4/(d-2)`, `d >= 3`
    EnergyCritical,
    /// `p > 4/(d-2)`, `d >= 3`
    Supercritical,
}

/// `(q, r)` with the companion `r_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTriple {
    pub q: f64,
    pub r: f64,
    pub r_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub d: usize,
    pub p: f64,
    pub s_c: f64,
    pub gamma: f64,
    pub regime: Regime,
    /// Critical value `p` was snapped onto, if any.
    pub snapped_to: Option<f64>,
    pub boundary_tolerance: f64,
    /// `4/(d-2)`, only for `d >= 3`.
    pub energy_critical_power: Option<f64>,
    /// `q = p+2`, `r = 2d(p+2)/(2(d-2)+dp)`, `r_c = dp(p+2)/4` for
    /// `p in [4/d, 4/(d-2)]`.
    pub intercritical_pair: Option<ExponentTriple>,
    /// `q = 2(p+2)/(dp-2)`, `r = 2d(p+2)/(4+d(2-p))`,
    /// `r_c = dp(p+2)/(2(dp-2))` for `p in (2/d, 4/d)` with `p >= 4/(d+2)`.
    pub subcritical_triple: Option<ExponentTriple>,
    /// Lower bound on the critical time exponent `q_c`, for `p > 4/d`.
    #[serde(rename = "Q_threshold")]
    pub q_threshold: Option<f64>,
    pub p0: f64,
    /// Growth exponent of `||J(t)u||_2`, for `p > 4/d`.
    pub decay_c1: Option<f64>,
    /// Decay exponent of `||e^{i s \Delta}u||_{L^{p+2}_{s,x}}`, for `p > 4/d`.
    pub decay_rate_w: Option<f64>,
    /// `p > p0`; present only for `d = 1`.
    pub one_d_scattering_ok: Option<bool>,
}

fn snap(p: f64, critical: &[f64]) -> (f64, Option<f64>) {
    for &c in critical {
        if (p - c).abs() <= BOUNDARY_TOLERANCE {
            return (c, Some(c));
        }
    }
    (p, None)
}

/// Every exponent derived from `(d, p)`. Fields outside their range of
/// definition are `None`.
///
/// # Panics
/// If `d == 0` or `p` is not a positive finite number.
pub fn exponent_report(d: usize, p: f64) -> ExponentReport {
    assert!(d >= 1, "dimension must be at least 1");
    assert!(p > 0.0 && p.is_finite(), "power must be positive and finite");
    let df = d as f64;
    let mass = 4.0 / df;
    let long = 2.0 / df;
    let energy = (d >= 3).then(|| 4.0 / (df - 2.0));
    let mut critical = vec![long, mass];
    critical.extend(energy);
    let (pc, snapped_to) = snap(p, &critical);

    let regime = if pc <= long {
        Regime::LongRange
    } else if pc < mass {
        Regime::MassSubcritical
    } else if pc == mass {
        Regime::MassCritical
    } else {
        match energy {
            Some(e) if pc == e => Regime::EnergyCritical,
            Some(e) if pc > e => Regime::Supercritical,
            _ => Regime::Intercritical,
        }
    };
    let energy_subcritical_or_critical = energy.is_none_or(|e| pc <= e);

    let intercritical_pair = (pc >= mass && energy_subcritical_or_critical).then(|| {
        let q = p + 2.0;
        let r = 2.0 * df * (p + 2.0) / (2.0 * (df - 2.0) + df * p);
        let r_c = if pc == mass { r } else { df * p * (p + 2.0) / 4.0 };
        ExponentTriple { q, r, r_c }
    });
    let subcritical_triple = (pc > long && pc < mass && pc >= 4.0 / (df + 2.0)).then(|| ExponentTriple {
        q: 2.0 * (p + 2.0) / (df * p - 2.0),
        r: 2.0 * df * (p + 2.0) / (4.0 + df * (2.0 - p)),
        r_c: df * p * (p + 2.0) / (2.0 * (df * p - 2.0)),
    });

    let supercritical = pc > mass && energy_subcritical_or_critical;
    let high = pc > 8.0 / df;
    let q_threshold = supercritical.then(|| {
        if high {
            2.0 * p / (df * p - 4.0)
        } else {
            8.0 * p / (df * p - 4.0).powi(2)
        }
    });
    let decay_c1 = supercritical.then(|| if high { 0.0 } else { 2.0 - df * p / 4.0 });
    let decay_rate_w = supercritical.then(|| {
        if high {
            -2.0 / (p + 2.0)
        } else {
            -(df * p - 4.0) / (2.0 * (p + 2.0))
        }
    });

    ExponentReport {
        d,
        p,
        s_c: df / 2.0 - 2.0 / p,
        gamma: 2.0 / p - df / 2.0,
        regime,
        snapped_to,
        boundary_tolerance: BOUNDARY_TOLERANCE,
        energy_critical_power: energy,
        intercritical_pair,
        subcritical_triple,
        q_threshold,
        p0: p0(),
        decay_c1,
        decay_rate_w,
        one_d_scattering_ok: (d == 1).then(|| p > p0()),
    }
}

/// Schrödinger admissibility: `2 <= q, r <= inf`, `2/q + d/r = d/2` (to
/// 1e-12), and `(d, q, r) != (2, 2, inf)`.
pub fn admissible(q: f64, r: f64, d: usize) -> bool {
    if d == 0 || q.is_nan() || r.is_nan() || q < 2.0 || r < 2.0 {
        return false;
    }
    if d == 2 && q == 2.0 && r.is_infinite() {
        return false;
    }
    let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
    (2.0 * inv(q) + d as f64 * inv(r) - d as f64 / 2.0).abs() <= 1e-12
}

/// A critical space-time pair `(q_c, r_c)` with `2/q_c + d/r_c = 2/p` and
/// its companion admissible pair `(q, r)` with `p/q_c + 2/q = 1` and
/// `p/r_c + 2/r = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPairs {
    pub q_c: f64,
    pub r_c: f64,
    pub q: f64,
    pub r: f64,
}

/// Critical pairs for `d >= 2`, `4/d < p` (`p <= 4/(d-2)` when `d >= 3`),
/// and `q_c > max(p + 1, Q(d, p))`. `None` outside that range.
pub fn critical_pairs(d: usize, p: f64, q_c: f64) -> Option<CriticalPairs> {
    if d < 2 {
        return None;
    }
    let report = exponent_report(d, p);
    let q_min = report.q_threshold?.max(p + 1.0);
    if !(q_c > q_min) {
        return None;
    }
    let df = d as f64;
    let r_c = df / (2.0 / p - 2.0 / q_c);
    let q = 2.0 / (1.0 - p / q_c);
    let r = df / (df / 2.0 - 2.0 / q);
    Some(CriticalPairs { q_c, r_c, q, r })
}

/// The one-dimensional critical norm `L^{2p}_t L^inf_s L^p_x`, as
/// `(time exponent, space exponent)`, for `p > p0`.
pub fn one_d_critical_exponents(p: f64) -> Option<(f64, f64)> {
    (p > p0()).then_some((2.0 * p, p))
}

/// Every `(q, r)` pair the report emits, with a label, plus the companion
/// pair of [`critical_pairs`] at `q_c = max(Q, p + 1) + 1` when `d >= 2`.
pub fn emitted_pairs(report: &ExponentReport) -> Vec<(&'static str, f64, f64)> {
    let mut out = Vec::new();
    if let Some(t) = report.intercritical_pair {
        out.push(("intercritical", t.q, t.r));
    }
    if let Some(t) = report.subcritical_triple {
        out.push(("subcritical", t.q, t.r));
    }
    if let Some(q) = report.q_threshold {
        if let Some(c) = critical_pairs(report.d, report.p, q.max(report.p + 1.0) + 1.0) {
            out.push(("critical_companion", c.q, c.r));
        }
    }
    out
}

/// Residuals of the scaling relations between the exponents of a report;
/// each is zero in exact arithmetic.
pub fn scaling_residuals(report: &ExponentReport) -> Vec<(&'static str, f64)> {
    let (df, p) = (report.d as f64, report.p);
    let mut out = vec![
        ("s_c + gamma", report.s_c + report.gamma),
        ("s_c - (d/2 - 2/p)", report.s_c - (df / 2.0 - 2.0 / p)),
    ];
    if let Some(t) = report.intercritical_pair {
        out.push(("2/q + d/r_c - 2/p", 2.0 / t.q + df / t.r_c - 2.0 / p));
        out.push(("d/r_c - (d/r - s_c)", df / t.r_c - (df / t.r - report.s_c)));
    }
    if let Some(t) = report.subcritical_triple {
        out.push((
            "2/q + d/r_c - (d/2 - gamma)",
            2.0 / t.q + df / t.r_c - (df / 2.0 - report.gamma),
        ));
        out.push(("d/r_c - (d/r - gamma)", df / t.r_c - (df / t.r - report.gamma)));
    }
    if let Some(q) = report.q_threshold {
        if let Some(c) = critical_pairs(report.d, p, q.max(p + 1.0) + 1.0) {
            out.push(("2/q_c + d/r_c - 2/p", 2.0 / c.q_c + df / c.r_c - 2.0 / p));
            out.push(("p/q_c + 2/q - 1", p / c.q_c + 2.0 / c.q - 1.0));
            out.push(("p/r_c + 2/r - 1", p / c.r_c + 2.0 / c.r - 1.0));
        }
    }
    out
}
