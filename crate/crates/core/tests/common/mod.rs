//! Reference computations that share no code path with the adaptive engine.
#![allow(dead_code)]

use std::f64::consts::PI;

use voigt_casimir::reflectivity::{reflection_products, static_limit, WavevectorNode};
use voigt_casimir::MaterialSpec;

/// Fixed-grid trapezoid evaluation of the reduction factor on `(n+1)²` nodes.
///
/// Works in polar coordinates of the `(ξ, Q)` quarter plane,
/// `ξ = k sin θ`, `Q = k cos θ`, so the measure `Q dQ dξ k` becomes
/// `k³ cos θ dk dθ`. Nodes are graded with `θ = (π/2) w²` (the damping
/// edge sits near `θ = 0`) and `k = v/(1−v)/(2L)`.
pub fn trapezoid_eta(spec: &MaterialSpec, l_hat: f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut total = 0.0;
    for i in 0..=n {
        let w = i as f64 * h;
        let wt_w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let theta = 0.5 * PI * w * w;
        let dtheta = PI * w;
        let cos = theta.cos();
        if dtheta == 0.0 || cos <= 0.0 {
            continue;
        }
        let sin = theta.sin();
        let mut row = 0.0;
        for j in 1..n {
            let v = j as f64 * h;
            let k = v / (1.0 - v) / (2.0 * l_hat);
            let dk = 1.0 / ((1.0 - v) * (1.0 - v)) / (2.0 * l_hat);
            let xi = k * sin;
            let q = k * cos;
            let r = if xi == 0.0 {
                static_limit(spec, q)
            } else {
                reflection_products(spec, &WavevectorNode::new(xi, q)).unwrap()
            };
            let x = 2.0 * k * l_hat;
            let g = |r: f64| if r == 0.0 { 0.0 } else { r / (x.exp() - r) };
            let f = k.powi(3) * cos * (g(r.rs_prod) + g(r.rp_prod)) * dk * dtheta;
            if f.is_finite() {
                row += f;
            }
        }
        total += wt_w * row;
    }
    120.0 * l_hat.powi(4) / PI.powi(4) * total * h * h
}

/// Roots of `(1 − z) z⁴ = lambda` on either side of `z = 4/5` by Newton's
/// method on the polynomial.
pub fn polynomial_equilibria(lambda: f64) -> (f64, f64) {
    let newton = |mut z: f64| {
        for _ in 0..200 {
            let f = (1.0 - z) * z.powi(4) - lambda;
            let df = 4.0 * z.powi(3) - 5.0 * z.powi(4);
            let step = f / df;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        z
    };
    (newton(0.5), newton(0.99))
}
