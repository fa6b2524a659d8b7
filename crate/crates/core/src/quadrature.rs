//! Composite Gauss-Legendre quadrature.
//!
//! Numeric counterpart to the closed-form cumulatives in [`crate::asymptote`];
//! the two share no code.

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `∫_a^b f` over `panels` equal sub-intervals.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (node, weight) in NODES.iter().zip(WEIGHTS.iter()) {
            s += weight * f(mid + half * node);
        }
        total += s * half;
    }
    total
}

/// `∫_a^b f` for `0 < a < b`, integrating in `u = ln r` so that panels are
/// spread evenly over decades. Suited to power-law integrands.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    integrate(
        |u| {
            let r = u.exp();
            f(r) * r
        },
        a.ln(),
        b.ln(),
        panels,
    )
}
