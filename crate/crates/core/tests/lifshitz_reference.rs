mod common;

use common::trapezoid_eta;
use voigt_casimir::{eta, MaterialSpec, QuadratureConfig};

const REFERENCE_NODES: usize = 1000;

#[test]
fn adaptive_matches_trapezoid_reference() {
    let cfg = QuadratureConfig::default();
    let cases = [
        (MaterialSpec::drude(15.7, 0.01, 0.0), 1.0),
        (MaterialSpec::drude(15.7, 0.01, 0.0), 0.1),
        (MaterialSpec::drude(15.7, 0.01, 6.0), 1.0),
        (MaterialSpec::drude(15.7, 0.01, 2.0), 10.0),
        (MaterialSpec::drude(4.0, 0.0, 5.0), 0.8),
    ];
    for (spec, l) in cases {
        let adaptive = eta(&spec, l, &cfg).unwrap();
        let reference = trapezoid_eta(&spec, l, REFERENCE_NODES);
        let rel = (adaptive.eta / reference - 1.0).abs();
        assert!(
            rel < 1e-4,
            "{spec:?} L={l}: adaptive {} vs reference {reference}",
            adaptive.eta
        );
        assert!(adaptive.converged);
    }
}

/// Frozen from the reference trapezoid (and an independent scipy
/// evaluation of the same double integral) for ε_L = 15.7, γ = 0.01.
#[test]
fn frozen_default_material_values() {
    let cfg = QuadratureConfig::default();
    let spec = MaterialSpec::default();
    for (omega_c, l, expected) in [
        (0.0, 1.0, 0.499938504),
        (0.0, 0.1, 0.360502283),
        (5.0, 0.8, 0.423307342),
        (6.0, 1.0, 0.442057685),
    ] {
        let p = eta(&spec.with_field(omega_c), l, &cfg).unwrap();
        assert!((p.eta / expected - 1.0).abs() < 1e-5, "Ω={omega_c} L={l}: {}", p.eta);
    }
}

#[test]
fn perfect_conductor_reference_is_unity() {
    let r = trapezoid_eta(&MaterialSpec::perfect_conductor(), 1.0, REFERENCE_NODES);
    assert!((r - 1.0).abs() < 1e-5, "{r}");
}

#[test]
fn eta_grows_with_separation() {
    let cfg = QuadratureConfig::default();
    let spec = MaterialSpec::default();
    let ls: Vec<f64> = (0..13).map(|i| 0.1 * 10f64.powf(i as f64 / 4.0)).collect();
    let curve = voigt_casimir::eta_curve(&spec, &ls, &cfg).unwrap();
    for w in curve.windows(2) {
        assert!(w[1].eta >= w[0].eta, "{:?} -> {:?}", w[0], w[1]);
    }
    for &i in &[0usize, 6, 12] {
        let reference = trapezoid_eta(&spec, ls[i], REFERENCE_NODES);
        assert!(
            (curve[i].eta / reference - 1.0).abs() < 1e-4,
            "L={}: {} vs {reference}",
            ls[i],
            curve[i].eta
        );
    }
}

#[test]
fn eta_decreases_with_field() {
    let cfg = QuadratureConfig::default();
    let spec = MaterialSpec::default();
    let etas: Vec<f64> = [0.0, 1.0, 2.0, 5.0, 6.0]
        .iter()
        .map(|&w| eta(&spec.with_field(w), 1.0, &cfg).unwrap().eta)
        .collect();
    for w in etas.windows(2) {
        assert!(w[1] < w[0], "{etas:?}");
    }
}
