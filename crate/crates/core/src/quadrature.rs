//! Globally adaptive Gauss–Kronrod (7/15) quadrature with deterministic
//! panel ordering.
//!
//! Integrands return a value together with an absolute error of their own,
//! which lets an outer integral absorb the error of an inner one. The error
//! estimate of a panel is `|K15 − G7|` plus the Kronrod-weighted integrand
//! errors.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1]; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Hard cap on live panels, independent of depth.
pub const MAX_PANELS: usize = 2000;

/// Value and absolute error returned by one integrand call.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub err: f64,
}

impl Sample {
    pub fn exact(value: f64) -> Self {
        Sample { value, err: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    /// Maximum number of bisections of any panel.
    pub max_depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err: f64,
    pub evals: u64,
    pub converged: bool,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F: FnMut(f64) -> Sample>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc.value;
    let mut gauss = WG[3] * fc.value;
    let mut inner_err = WGK[7] * fc.err;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1.value + f2.value);
        inner_err += WGK[j] * (f1.err + f2.err);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1.value + f2.value);
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs() + inner_err * half.abs();
    (value, err)
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> Sample>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Integral {
    let mut evals = 0u64;
    let mut counted = |x: f64| {
        evals += 1;
        f(x)
    };

    let (value, err) = gauss_kronrod(&mut counted, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value,
        err,
        depth: 0,
    });
    let mut frozen: Vec<Panel> = Vec::new();

    // Running totals only steer the loop; the result is re-summed below.
    let mut v_run = value;
    let mut e_run = err;
    let mut converged = false;
    loop {
        if e_run <= tol.abs.max(tol.rel * v_run.abs()) {
            converged = true;
            break;
        }
        if heap.len() + frozen.len() >= MAX_PANELS {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= tol.max_depth {
            frozen.push(worst);
            continue;
        }
        v_run -= worst.value;
        e_run -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, err) = gauss_kronrod(&mut counted, lo, hi);
            v_run += value;
            e_run += err;
            heap.push(Panel {
                a: lo,
                b: hi,
                value,
                err,
                depth: worst.depth + 1,
            });
        }
        e_run = e_run.max(0.0);
    }

    // Final sum in left-to-right order, independent of heap layout.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut v = KahanSum::default();
    let mut e = KahanSum::default();
    for p in &panels {
        v.add(p.value);
        e.add(p.err);
    }
    Integral {
        value: v.total(),
        err: e.total(),
        evals,
        converged,
    }
}

/// Integrates `f` over `[0, ∞)` through `t = u/(1−u)`.
pub fn integrate_half_line<F: FnMut(f64) -> Sample>(mut f: F, tol: &Tolerance) -> Integral {
    integrate(
        |u| {
            let one_minus = 1.0 - u;
            let t = u / one_minus;
            let jac = 1.0 / (one_minus * one_minus);
            let s = f(t);
            if s.value == 0.0 && s.err == 0.0 {
                return s;
            }
            Sample {
                value: s.value * jac,
                err: s.err * jac,
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const TOL: Tolerance = Tolerance {
        rel: 1e-10,
        abs: 1e-14,
        max_depth: 40,
    };

    #[test]
    fn polynomial_exact_in_one_panel() {
        let r = integrate(|x| Sample::exact(x.powi(5) - 3.0 * x * x), -1.0, 2.0, &TOL);
        assert_relative_eq!(r.value, 64.0 / 6.0 - 1.0 / 6.0 - 9.0, max_relative = 1e-14);
        assert_eq!(r.evals, 15);
        assert!(r.converged);
    }

    #[test]
    fn bose_integral_on_half_line() {
        let r = integrate_half_line(
            |x| Sample::exact(if x > 0.0 { x.powi(3) / x.exp_m1() } else { 0.0 }),
            &TOL,
        );
        assert_relative_eq!(r.value, PI.powi(4) / 15.0, max_relative = 1e-10);
        assert!(r.converged);
        assert!(r.err < 1e-9 * r.value);
    }

    #[test]
    fn peaked_integrand_adapts() {
        // ∫ 1/(x² + ε²) over [-1, 1] = (2/ε) atan(1/ε)
        let eps: f64 = 1e-3;
        let r = integrate(|x| Sample::exact(1.0 / (x * x + eps * eps)), -1.0, 1.0, &TOL);
        assert_relative_eq!(r.value, 2.0 / eps * (1.0 / eps).atan(), max_relative = 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn depth_limit_reports_nonconvergence() {
        let tol = Tolerance {
            rel: 1e-14,
            abs: 1e-300,
            max_depth: 2,
        };
        let r = integrate(|x| Sample::exact(x.abs().sqrt()), -1.0, 1.0, &tol);
        assert!(!r.converged);
        assert!(r.err > 0.0);
        assert!((r.value - 4.0 / 3.0).abs() <= r.err);
    }

    #[test]
    fn inner_errors_propagate() {
        let r = integrate(|_| Sample { value: 1.0, err: 1e-3 }, 0.0, 2.0, &TOL);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-14);
        assert!(r.err >= 2e-3 * 0.999);
    }

    #[test]
    fn compensated_sum() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert_relative_eq!(s.total(), 1e-15, max_relative = 1e-10);
    }
}
