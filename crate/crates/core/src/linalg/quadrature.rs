//! Gauss-Legendre quadrature on arbitrary finite intervals.
//!
//! Nodes are roots of the Legendre polynomial, found by Newton iteration
//! from the classical Chebyshev-based initial guesses; an order-`q` rule
//! integrates polynomials up to degree `2q - 1` exactly.

use crate::{Error, Result};

/// Nodes and weights of the order-`order` Gauss-Legendre rule on `[a, b]`.
///
/// Weights are positive and sum to `b - a`.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::Value("quadrature order must be at least 1".into()));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Value("interval endpoints must be finite".into()));
    }
    if a >= b {
        return Err(Error::Value(format!(
            "interval is empty or reversed: a = {a}, b = {b}"
        )));
    }

    let (ref_nodes, ref_weights) = reference_rule(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = ref_nodes.iter().map(|x| mid + half * x).collect();
    let weights = ref_weights.iter().map(|w| half * w).collect();
    Ok((nodes, weights))
}

/// Composite rule: `panels` equal Gauss-Legendre panels of order `order`
/// covering `[a, b]`.
pub fn panel_rule(order: usize, a: f64, b: f64, panels: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if panels == 0 {
        return Err(Error::Value("panel count must be at least 1".into()));
    }
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(order * panels);
    let mut weights = Vec::with_capacity(order * panels);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let (n, w) = gauss_legendre(order, lo, lo + width)?;
        nodes.extend(n);
        weights.extend(w);
    }
    Ok((nodes, weights))
}

/// Rule on `[-1, 1]`, ascending nodes.
fn reference_rule(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Roots come out in descending order with this guess; fill from the back.
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}
