//! Pull-in analysis of a plate on a linear spring attracted by the Casimir
//! force.
//!
//! Force balance `κ(L₀ − z) = π²ħcA η(z)/(240 z⁴)` in the variables
//! `z̄ = z/L₀` and `λ = F₀(L₀)/(κL₀)` reads
//!
//! ```text
//! λ(z̄) = (1 − z̄) z̄⁴ / η(z̄ L₀)
//! ```
//!
//! Equilibria exist only for `λ` below the fold `λ_in = max λ(z̄)`. The
//! branch above the fold gap `z̄_in` is stable.

pub mod device;

pub use device::{device_translate, CantileverGeometry, DeviceReport};

use rayon::prelude::*;

use crate::error::{positive, Error, Result};
use crate::lifshitz::EtaCache;
use crate::lifshitz::{EtaPoint, LifshitzEta, QuadratureConfig, ReductionFactor};
use crate::material::MaterialSpec;
use std::sync::Arc;

/// Samples in the bracketing scan of [`find_pullin`].
pub const SCAN_POINTS: usize = 64;
/// Width of the final golden-section bracket on `z̄`.
pub const ARGMAX_TOL: f64 = 1e-6;
/// Root tolerance of [`solve_equilibria`] on `z̄`.
pub const ROOT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationPoint {
    pub z_bar: f64,
    pub lambda: f64,
    pub eta_at: f64,
    pub converged: bool,
}

/// Uniform `z̄` grid of a bifurcation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveGrid {
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
}

impl Default for CurveGrid {
    fn default() -> Self {
        CurveGrid {
            z_min: 0.05,
            z_max: 0.999,
            n_points: 101,
        }
    }
}

impl CurveGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 3 {
            return Err(Error::Invalid(format!(
                "bifurcation grid needs at least 3 points, got {}",
                self.n_points
            )));
        }
        if !(self.z_min > 0.0 && self.z_min < self.z_max && self.z_max < 1.0) {
            return Err(Error::Invalid(format!(
                "z range must satisfy 0 < z_min < z_max < 1, got [{}, {}]",
                self.z_min, self.z_max
            )));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<f64> {
        let step = (self.z_max - self.z_min) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.z_max
                } else {
                    self.z_min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullInResult {
    pub z_bar_in: f64,
    pub lambda_in: f64,
    pub omega_c_hat: f64,
    pub l0_hat: f64,
    pub eta_in: f64,
    /// `λ_in(0)/λ_in(Ω_c)`; set once a zero-field baseline is known.
    pub kappa_min_ratio: Option<f64>,
    /// `(λ_in(Ω_c)/λ_in(0))^{1/3}`; set once a zero-field baseline is known.
    pub detach_ratio: Option<f64>,
    /// False if any `η` used in the search failed to converge.
    pub converged: bool,
}

impl PullInResult {
    pub fn with_baseline(mut self, baseline_lambda_in: f64) -> Self {
        let ratio = self.lambda_in / baseline_lambda_in;
        self.kappa_min_ratio = Some(1.0 / ratio);
        self.detach_ratio = Some(ratio.cbrt());
        self
    }
}

/// One root of `λ(z̄) = λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub z_bar: f64,
    pub stable: bool,
}

fn check_l0(l0_hat: f64) -> Result<()> {
    positive("L0_hat", l0_hat).map(|_| ())
}

struct LambdaEval<'a, S: ?Sized> {
    source: &'a S,
    l0_hat: f64,
}

impl<S: ReductionFactor + ?Sized> LambdaEval<'_, S> {
    fn at(&self, z_bar: f64) -> Result<(f64, EtaPoint)> {
        let p = self.source.eta_at(z_bar * self.l0_hat)?;
        if p.eta.is_nan() || p.eta <= 0.0 {
            return Err(Error::Invalid(format!(
                "non-positive eta {} at L_hat = {}",
                p.eta, p.l_hat
            )));
        }
        Ok(((1.0 - z_bar) * z_bar.powi(4) / p.eta, p))
    }
}

pub fn bifurcation_curve<S: ReductionFactor + ?Sized>(
    source: &S,
    l0_hat: f64,
    grid: &CurveGrid,
) -> Result<Vec<BifurcationPoint>> {
    check_l0(l0_hat)?;
    grid.validate()?;
    let eval = LambdaEval { source, l0_hat };
    grid.nodes()
        .into_par_iter()
        .map(|z| {
            let (lambda, p) = eval.at(z)?;
            Ok(BifurcationPoint {
                z_bar: z,
                lambda,
                eta_at: p.eta,
                converged: p.converged,
            })
        })
        .collect()
}

/// Locates the fold of `λ(z̄)` on `[grid.z_min, grid.z_max]`.
///
/// A [`SCAN_POINTS`]-sample scan brackets the maximum, then golden-section
/// search narrows the bracket to [`ARGMAX_TOL`]. The result carries no
/// baseline ratios.
pub fn find_pullin<S: ReductionFactor + ?Sized>(source: &S, l0_hat: f64, grid: &CurveGrid) -> Result<PullInResult> {
    check_l0(l0_hat)?;
    grid.validate()?;
    let eval = LambdaEval { source, l0_hat };
    let scan = CurveGrid {
        n_points: SCAN_POINTS,
        ..*grid
    };
    let nodes = scan.nodes();
    let samples: Vec<(f64, EtaPoint)> = nodes.par_iter().map(|&z| eval.at(z)).collect::<Result<_>>()?;
    let mut converged = samples.iter().all(|s| s.1.converged);

    let peaks = (1..nodes.len() - 1)
        .filter(|&i| samples[i].0 >= samples[i - 1].0 && samples[i].0 > samples[i + 1].0)
        .count();
    let best = (0..nodes.len())
        .max_by(|&i, &j| samples[i].0.total_cmp(&samples[j].0))
        .unwrap();
    if peaks != 1 || best == 0 || best + 1 == nodes.len() {
        return Err(Error::NotUnimodal {
            grid: nodes.iter().zip(&samples).map(|(&z, s)| (z, s.0)).collect(),
        });
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (nodes[best - 1], nodes[best + 1]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, pc) = eval.at(c)?;
    let (mut fd, pd) = eval.at(d)?;
    converged &= pc.converged && pd.converged;
    while b - a > ARGMAX_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            let (f, p) = eval.at(c)?;
            fc = f;
            converged &= p.converged;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            let (f, p) = eval.at(d)?;
            fd = f;
            converged &= p.converged;
        }
    }
    let z_in = 0.5 * (a + b);
    let (lambda_in, p) = eval.at(z_in)?;
    Ok(PullInResult {
        z_bar_in: z_in,
        lambda_in,
        omega_c_hat: source.omega_c_hat(),
        l0_hat,
        eta_in: p.eta,
        kappa_min_ratio: None,
        detach_ratio: None,
        converged: converged && p.converged,
    })
}

fn bisect<F: FnMut(f64) -> Result<f64>>(mut g: F, mut lo: f64, mut hi: f64, g_lo: f64) -> Result<f64> {
    let lo_sign = g_lo.signum();
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The two equilibrium gaps at load `lambda`, unstable first.
///
/// `pullin` must come from [`find_pullin`] on the same source and `L₀`.
pub fn solve_equilibria<S: ReductionFactor + ?Sized>(
    source: &S,
    lambda: f64,
    pullin: &PullInResult,
) -> Result<[Equilibrium; 2]> {
    positive("lambda", lambda)?;
    if lambda >= pullin.lambda_in {
        return Err(Error::NoEquilibrium {
            lambda,
            lambda_in: pullin.lambda_in,
        });
    }
    let eval = LambdaEval {
        source,
        l0_hat: pullin.l0_hat,
    };
    let g = |z: f64| eval.at(z).map(|(l, _)| l - lambda);

    // λ → 0 as z̄ → 0; walk down until the lower bracket end is below the load.
    let mut lo = pullin.z_bar_in * 0.5;
    let mut g_lo = g(lo)?;
    while g_lo >= 0.0 {
        lo *= 0.5;
        if lo < 1e-12 {
            return Err(Error::Invalid(format!(
                "could not bracket the unstable root for lambda = {lambda}"
            )));
        }
        g_lo = g(lo)?;
    }
    let unstable = bisect(g, lo, pullin.z_bar_in, g_lo)?;

    // λ(1) = 0 exactly.
    let stable = bisect(g, pullin.z_bar_in, 1.0, pullin.lambda_in - lambda)?;

    Ok([
        Equilibrium {
            z_bar: unstable,
            stable: false,
        },
        Equilibrium {
            z_bar: stable,
            stable: true,
        },
    ])
}

/// Pull-in points for each field value, with ratios against the entry at
/// `baseline` (normally zero field).
pub fn field_sweep(
    template: &MaterialSpec,
    l0_hat: f64,
    fields: &[f64],
    config: &QuadratureConfig,
    grid: &CurveGrid,
    baseline: f64,
    cache: Option<Arc<EtaCache>>,
) -> Result<Vec<PullInResult>> {
    if fields.is_empty() {
        return Err(Error::Invalid("field list is empty".into()));
    }
    let base_idx = fields
        .iter()
        .position(|&w| w == baseline)
        .ok_or(Error::MissingBaseline(baseline))?;
    let results: Vec<PullInResult> = fields
        .par_iter()
        .map(|&w| {
            let mut src = LifshitzEta::new(template.with_field(w), *config);
            if let Some(c) = &cache {
                src = src.with_cache(c.clone());
            }
            find_pullin(&src, l0_hat, grid)
        })
        .collect::<Result<_>>()?;
    let base = results[base_idx].lambda_in;
    Ok(results.into_iter().map(|r| r.with_baseline(base)).collect())
}
