//! Reduction factor `η = F/F₀` of the zero-temperature Lifshitz force
//! between two identical plates.
//!
//! In plasma units
//!
//! ```text
//! η = (120 L⁴/π⁴) ∫₀^∞ dξ ∫₀^∞ Q dQ  k Σ_σ [(r₁σ r₂σ)⁻¹ e^{2kL} − 1]⁻¹
//! ```
//!
//! Using `Q dQ = k dk`, `x = 2kL` and `y = 2ξL` this becomes
//!
//! ```text
//! η = 15/(2π⁴) ∫₀^∞ dy ∫₀^∞ dt  x² Σ_σ r_σ e^{−x} / (1 − r_σ e^{−x}),   x = y + t
//! ```
//!
//! For `r = 1` the double integral equals `2π⁴/15` and `η = 1`. Both
//! half-lines are mapped onto `[0, 1)` and integrated adaptively. The inner
//! error estimates are carried into the outer one.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;
use rayon::prelude::*;

use crate::error::{positive, Error, Result};
use crate::material::{MaterialSpec, PlateModel};
use crate::quadrature::{integrate_half_line, Sample, Tolerance};
use crate::reflectivity::{reflection_products, static_limit, ReflectionProduct, WavevectorNode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        if self.max_depth == 0 {
            return Err(Error::Invalid("max_depth must be >= 1".into()));
        }
        Ok(())
    }

    /// Same tolerances with the relative one scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        QuadratureConfig {
            rel_tol: self.rel_tol * factor,
            ..self
        }
    }
}

/// One reduction-factor evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPoint {
    pub l_hat: f64,
    pub omega_c_hat: f64,
    pub eta: f64,
    pub err_est: f64,
    pub evals: u64,
    pub converged: bool,
}

const PREFACTOR: f64 = 15.0 / (2.0 * PI * PI * PI * PI);

/// `r e^{−x} / (1 − r e^{−x})`, accurate when `r → 1` and `x → 0`.
#[inline]
fn mode_weight(r: f64, x: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let e = (-x).exp();
    let denom = (1.0 - r) - r * (-x).exp_m1();
    r * e / denom
}

pub fn eta(spec: &MaterialSpec, l_hat: f64, config: &QuadratureConfig) -> Result<EtaPoint> {
    positive("L_hat", l_hat)?;
    spec.validate()?;
    config.validate()?;

    let outer_tol = Tolerance {
        rel: config.rel_tol,
        abs: config.abs_tol,
        max_depth: config.max_depth,
    };
    let inner_tol = Tolerance {
        rel: config.rel_tol * 0.1,
        ..outer_tol
    };
    let scale = 1.0 / (2.0 * l_hat);

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_ok = Cell::new(true);
    let inner_evals = Cell::new(0u64);

    let reflect = |y: f64, t: f64| -> ReflectionProduct {
        let q_hat = (t * (t + 2.0 * y)).sqrt() * scale;
        if y == 0.0 {
            return static_limit(spec, q_hat);
        }
        match reflection_products(spec, &WavevectorNode::new(y * scale, q_hat)) {
            Ok(r) => r,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                ReflectionProduct {
                    rs_prod: 0.0,
                    rp_prod: 0.0,
                }
            }
        }
    };

    let outer = integrate_half_line(
        |y| {
            // Past this point the whole inner integral is below e^{-y}·poly(y).
            if y > 745.0 {
                return Sample::exact(0.0);
            }
            let inner = integrate_half_line(
                |t| {
                    let x = y + t;
                    if x > 745.0 {
                        return Sample::exact(0.0);
                    }
                    let r = reflect(y, t);
                    Sample::exact(x * x * (mode_weight(r.rs_prod, x) + mode_weight(r.rp_prod, x)))
                },
                &inner_tol,
            );
            inner_evals.set(inner_evals.get() + inner.evals);
            if !inner.converged {
                inner_ok.set(false);
            }
            Sample {
                value: inner.value,
                err: inner.err,
            }
        },
        &outer_tol,
    );

    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = PREFACTOR * outer.value;
    if !value.is_finite() {
        return Err(Error::NonFinite("reduction factor"));
    }
    Ok(EtaPoint {
        l_hat,
        omega_c_hat: spec.effective_field(),
        eta: value,
        err_est: PREFACTOR * outer.err,
        evals: inner_evals.get(),
        converged: outer.converged && inner_ok.get(),
    })
}

/// Evaluates [`eta`] at every separation, in parallel on the current rayon
/// pool. Results do not depend on the pool size.
pub fn eta_curve(spec: &MaterialSpec, l_hats: &[f64], config: &QuadratureConfig) -> Result<Vec<EtaPoint>> {
    for &l in l_hats {
        positive("L_hat", l)?;
    }
    if l_hats.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("separations must be strictly increasing".into()));
    }
    l_hats.par_iter().map(|&l| eta(spec, l, config)).collect()
}

/// Anything that can supply `η` at a dimensionless separation.
pub trait ReductionFactor: Sync {
    fn eta_at(&self, l_hat: f64) -> Result<EtaPoint>;

    /// Field ratio reported alongside results.
    fn omega_c_hat(&self) -> f64 {
        0.0
    }
}

/// A separation-independent `η`. Used for the fixed-`η` comparison mode and
/// as a stub in tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantEta {
    pub eta: f64,
    pub omega_c_hat: f64,
}

impl ConstantEta {
    pub fn new(eta: f64) -> Self {
        ConstantEta { eta, omega_c_hat: 0.0 }
    }
}

impl ReductionFactor for ConstantEta {
    fn eta_at(&self, l_hat: f64) -> Result<EtaPoint> {
        positive("L_hat", l_hat)?;
        Ok(EtaPoint {
            l_hat,
            omega_c_hat: self.omega_c_hat,
            eta: self.eta,
            err_est: 0.0,
            evals: 1,
            converged: true,
        })
    }

    fn omega_c_hat(&self) -> f64 {
        self.omega_c_hat
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey {
    eps_l: u64,
    gamma_hat: u64,
    omega_c_hat: u64,
    model: PlateModel,
    l_hat: u64,
    rel_tol: u64,
    abs_tol: u64,
    max_depth: u32,
}

impl CacheKey {
    fn new(spec: &MaterialSpec, l_hat: f64, config: &QuadratureConfig) -> Self {
        // Fields a model ignores are zeroed so equivalent specs share entries.
        let (eps_l, gamma_hat) = match spec.model {
            PlateModel::PerfectConductor => (0.0, 0.0),
            _ => (spec.eps_l, spec.gamma_hat),
        };
        CacheKey {
            eps_l: eps_l.to_bits(),
            gamma_hat: gamma_hat.to_bits(),
            omega_c_hat: spec.effective_field().to_bits(),
            model: spec.model,
            l_hat: l_hat.to_bits(),
            rel_tol: config.rel_tol.to_bits(),
            abs_tol: config.abs_tol.to_bits(),
            max_depth: config.max_depth,
        }
    }
}

/// Thread-safe LRU memo of [`eta`] results.
pub struct EtaCache {
    inner: Mutex<LruCache<CacheKey, EtaPoint>>,
}

impl std::fmt::Debug for EtaCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EtaCache").field("len", &self.len()).finish()
    }
}

impl EtaCache {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).unwrap();
        EtaCache {
            inner: Mutex::new(LruCache::new(cap)),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_compute(&self, spec: &MaterialSpec, l_hat: f64, config: &QuadratureConfig) -> Result<EtaPoint> {
        let key = CacheKey::new(spec, l_hat, config);
        if let Some(hit) = self.inner.lock().unwrap().get(&key) {
            return Ok(*hit);
        }
        // Computed outside the lock; a racing duplicate computes the same value.
        let point = eta(spec, l_hat, config)?;
        self.inner.lock().unwrap().put(key, point);
        Ok(point)
    }
}

impl Default for EtaCache {
    fn default() -> Self {
        EtaCache::new(4096)
    }
}

/// [`eta`] for a fixed material and tolerance, optionally memoized.
#[derive(Debug, Clone)]
pub struct LifshitzEta {
    pub spec: MaterialSpec,
    pub config: QuadratureConfig,
    cache: Option<Arc<EtaCache>>,
}

impl LifshitzEta {
    pub fn new(spec: MaterialSpec, config: QuadratureConfig) -> Self {
        LifshitzEta {
            spec,
            config,
            cache: None,
        }
    }

    pub fn with_cache(mut self, cache: Arc<EtaCache>) -> Self {
        self.cache = Some(cache);
        self
    }
}

impl ReductionFactor for LifshitzEta {
    fn eta_at(&self, l_hat: f64) -> Result<EtaPoint> {
        match &self.cache {
            Some(c) => c.get_or_compute(&self.spec, l_hat, &self.config),
            None => eta(&self.spec, l_hat, &self.config),
        }
    }

    fn omega_c_hat(&self) -> f64 {
        self.spec.effective_field()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_conductor_normalization() {
        let pc = MaterialSpec::perfect_conductor();
        for l in [0.1, 1.0, 10.0] {
            let p = eta(&pc, l, &QuadratureConfig::default()).unwrap();
            assert!((p.eta - 1.0).abs() < 1e-6, "{p:?}");
            assert!(p.converged);
            assert!(p.err_est >= 0.0 && p.evals > 0);
        }
    }

    #[test]
    fn mode_weight_limits() {
        assert_eq!(mode_weight(0.0, 1.0), 0.0);
        let x: f64 = 1e-9;
        assert!((mode_weight(1.0, x) * x - 1.0).abs() < 1e-8);
        assert!((mode_weight(0.5, 2.0) - 0.5 / (2f64.exp() - 0.5)).abs() < 1e-15);
        assert_eq!(mode_weight(1.0, 800.0), 0.0);
    }

    #[test]
    fn rejects_bad_separation() {
        let spec = MaterialSpec::default();
        let cfg = QuadratureConfig::default();
        assert!(matches!(eta(&spec, 0.0, &cfg), Err(Error::Domain { .. })));
        assert!(matches!(eta(&spec, -1.0, &cfg), Err(Error::Domain { .. })));
        assert!(eta_curve(&spec, &[1.0, 0.5], &cfg).is_err());
        assert!(eta_curve(&spec, &[], &cfg).unwrap().is_empty());
    }

    #[test]
    fn tight_tolerance_flags_nonconvergence() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_depth: 2,
        };
        let p = eta(&MaterialSpec::default(), 1.0, &cfg).unwrap();
        assert!(!p.converged);
        assert!(p.err_est > 0.0);
    }

    #[test]
    fn cache_returns_identical_points() {
        let cache = Arc::new(EtaCache::new(8));
        let src = LifshitzEta::new(MaterialSpec::default().with_field(2.0), QuadratureConfig::default())
            .with_cache(cache.clone());
        let a = src.eta_at(0.8).unwrap();
        let b = src.eta_at(0.8).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
        assert_eq!(a, eta(&src.spec, 0.8, &src.config).unwrap());
    }

    #[test]
    fn curve_matches_pointwise() {
        let spec = MaterialSpec::default();
        let cfg = QuadratureConfig::default();
        let ls = [0.3, 1.0, 4.0];
        let curve = eta_curve(&spec, &ls, &cfg).unwrap();
        for (p, &l) in curve.iter().zip(&ls) {
            assert_eq!(*p, eta(&spec, l, &cfg).unwrap());
        }
    }
}
