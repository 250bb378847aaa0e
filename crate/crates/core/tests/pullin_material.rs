use std::sync::Arc;

use voigt_casimir::lifshitz::ConstantEta;
use voigt_casimir::pullin::device::{HBAR, SPEED_OF_LIGHT};
use voigt_casimir::pullin::{device_translate, CantileverGeometry};
use voigt_casimir::{
    bifurcation_curve, field_sweep, find_pullin, solve_equilibria, CurveGrid, EtaCache, LifshitzEta, MaterialSpec,
    QuadratureConfig,
};

const FIELDS: [f64; 5] = [0.0, 1.0, 2.0, 5.0, 6.0];

#[test]
fn default_material_pullin_near_four_fifths() {
    let src = LifshitzEta::new(MaterialSpec::default(), QuadratureConfig::default());
    let r = find_pullin(&src, 1.0, &CurveGrid::default()).unwrap();
    assert!((0.78..=0.82).contains(&r.z_bar_in), "{r:?}");
    // Independent bounded scalar maximization of the same λ(z̄) (scipy):
    // z̄_in = 0.78906, λ_in = 0.174506.
    assert!((r.z_bar_in - 0.78906).abs() < 5e-4, "{r:?}");
    assert!((r.lambda_in / 0.174506 - 1.0).abs() < 1e-4, "{r:?}");
    assert!(r.converged);
}

#[test]
fn sweep_over_reference_fields() {
    let cache = Arc::new(EtaCache::default());
    let sweep = field_sweep(
        &MaterialSpec::default(),
        1.0,
        &FIELDS,
        &QuadratureConfig::default(),
        &CurveGrid::default(),
        0.0,
        Some(cache),
    )
    .unwrap();
    assert_eq!(sweep[0].detach_ratio, Some(1.0));
    assert_eq!(sweep[0].kappa_min_ratio, Some(1.0));
    for w in sweep.windows(2) {
        assert!(w[1].lambda_in > w[0].lambda_in);
        assert!(w[1].detach_ratio.unwrap() > w[0].detach_ratio.unwrap());
    }
    for r in &sweep {
        let lock = r.detach_ratio.unwrap().powi(3) * r.kappa_min_ratio.unwrap();
        assert!((lock - 1.0).abs() < 1e-12);
        assert!((0.78..=0.82).contains(&r.z_bar_in));
    }
}

#[test]
fn bifurcation_maximum_grows_with_field() {
    let grid = CurveGrid {
        z_min: 0.05,
        z_max: 0.999,
        n_points: 41,
    };
    let mut last = 0.0;
    for w in [0.0, 2.0, 6.0] {
        let src = LifshitzEta::new(MaterialSpec::default().with_field(w), QuadratureConfig::default());
        let curve = bifurcation_curve(&src, 1.0, &grid).unwrap();
        for p in &curve {
            assert!(p.lambda >= (1.0 - p.z_bar) * p.z_bar.powi(4));
            assert!(p.eta_at > 0.0 && p.eta_at <= 1.0);
        }
        let max = curve.iter().map(|p| p.lambda).fold(0.0, f64::max);
        assert!(max > last);
        last = max;
    }
}

/// Direct SI force balance `κ(L₀ − z) = π²ħcA/(240 z⁴)` solved by bisection
/// agrees with the dimensionless route through λ.
#[test]
fn device_lambda_reproduces_force_balance() {
    let geom = CantileverGeometry {
        youngs_modulus: 169e9,
        width: 10e-6,
        thickness: 1e-6,
        length: 50e-6,
        gap: 100e-9,
        area: 100e-6 * 10e-6,
    };
    let src = ConstantEta::new(1.0);
    let pin = find_pullin(&src, 1.0, &CurveGrid::default()).unwrap();
    let report = device_translate(&geom, &pin, 1e14).unwrap();
    assert!(!report.pull_in);
    let [_, stable] = solve_equilibria(&src, report.lambda, &pin).unwrap();

    let kappa = geom.youngs_modulus * geom.width * geom.thickness.powi(3) / (4.0 * geom.length.powi(3));
    let force = |z: f64| std::f64::consts::PI.powi(2) * HBAR * SPEED_OF_LIGHT * geom.area / (240.0 * z.powi(4));
    let balance = |z: f64| kappa * (geom.gap - z) - force(z);
    let (mut lo, mut hi) = (0.8 * geom.gap, geom.gap);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z_si = 0.5 * (lo + hi) / geom.gap;
    assert!((stable.z_bar / z_si - 1.0).abs() < 1e-6, "{} vs {z_si}", stable.z_bar);
}
