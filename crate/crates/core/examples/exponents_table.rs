//! Regimes, critical exponents and Strichartz pairs over a grid of powers.
//!
//!     cargo run --example exponents_table -- [d]

use dmnls::exponents::{emitted_pairs, exponent_report};

fn main() {
    let dims: Vec<usize> = match std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        Some(d) => vec![d],
        None => vec![1, 2, 3],
    };
    for d in dims {
        println!("d = {d}");
        println!(
            "{:>6} {:>16} {:>8} {:>8} {:>8}  pairs (q, r)",
            "p", "regime", "s_c", "gamma", "Q"
        );
        for p in [0.5, 1.0, 4.0 / 3.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0] {
            let r = exponent_report(d, p);
            let q = r.q_threshold.map_or("-".to_string(), |q| format!("{q:.4}"));
            let pairs: Vec<String> = emitted_pairs(&r)
                .iter()
                .map(|(label, q, rr)| format!("{label} ({q:.3}, {rr:.3})"))
                .collect();
            println!(
                "{p:>6.3} {:>16} {:>8.4} {:>8.4} {q:>8}  {}",
                format!("{:?}", r.regime),
                r.s_c,
                r.gamma,
                pairs.join(", ")
            );
        }
        println!();
    }
}
