//! Two-plate reflection products at imaginary frequency in the Voigt geometry.
//!
//! With `B ∥ x` and the in-plane wavevector `Q ∥ y`, s waves `(E_x, H_y, H_z)`
//! see only `ε_xx` and p waves `(H_x, E_y, E_z)` see the Voigt permittivity
//! `ε_V`. Neither polarization converts into the other. For a single
//! half-space the p amplitude carries a gyrotropic term `±i(ε_yz/ε_yy)Q`
//! whose sign flips for the facing plate, because the mirror that maps one
//! plate onto the other reverses the in-plane field. The product of the two
//! amplitudes is then real:
//!
//! ```text
//! r_s r_s = ((κ₀ − κ_s)/(κ₀ + κ_s))²
//! r_p r_p = ((ε_V κ₀ − κ_m)² + ε̃²Q²) / ((ε_V κ₀ + κ_m)² + ε̃²Q²)
//! ```
//!
//! with `κ₀ = √(ξ² + Q²)`, `κ_s = √(Q² + ε_xx ξ²)`, `κ_m = √(Q² + ε_V ξ²)`,
//! `ε̃ = ε_yz/ε_yy`. Azimuthal anisotropy is not modelled: every in-plane
//! direction is treated as the pure Voigt orientation `Q ⊥ B`.

pub mod oracle;

pub use oracle::transfer_matrix_oracle;

use crate::error::{Error, Result};
use crate::material::{permittivity_at, MaterialSpec, PermittivitySample, PlateModel};

/// A point of the `(ξ, Q)` integration domain in plasma units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavevectorNode {
    pub xi_hat: f64,
    pub q_hat: f64,
    /// `√(ξ² + Q²)`.
    pub k_hat: f64,
}

impl WavevectorNode {
    pub fn new(xi_hat: f64, q_hat: f64) -> Self {
        WavevectorNode {
            xi_hat,
            q_hat,
            k_hat: xi_hat.hypot(q_hat),
        }
    }
}

/// `r₁ₛr₂ₛ` and `r₁ₚr₂ₚ` for two identical facing plates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionProduct {
    pub rs_prod: f64,
    pub rp_prod: f64,
}

impl ReflectionProduct {
    pub const PERFECT: ReflectionProduct = ReflectionProduct {
        rs_prod: 1.0,
        rp_prod: 1.0,
    };
}

fn check_node(node: &WavevectorNode) -> Result<()> {
    if !(node.xi_hat > 0.0 && node.xi_hat.is_finite()) {
        return Err(Error::Domain {
            name: "xi_hat",
            value: node.xi_hat,
            requirement: "imaginary frequency must be finite and > 0",
        });
    }
    if !(node.q_hat >= 0.0 && node.q_hat.is_finite()) {
        return Err(Error::Domain {
            name: "q_hat",
            value: node.q_hat,
            requirement: "must be finite and >= 0",
        });
    }
    Ok(())
}

pub fn reflection_products(spec: &MaterialSpec, node: &WavevectorNode) -> Result<ReflectionProduct> {
    check_node(node)?;
    if spec.model == PlateModel::PerfectConductor {
        return Ok(ReflectionProduct::PERFECT);
    }
    let perm = permittivity_at(spec, node.xi_hat)?;
    let out = products_for(&perm, node);
    if out.rs_prod.is_finite() && out.rp_prod.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("reflection products"))
    }
}

/// Closed-form products for an already evaluated tensor.
pub fn products_for(perm: &PermittivitySample, node: &WavevectorNode) -> ReflectionProduct {
    let xi2 = node.xi_hat * node.xi_hat;
    let q2 = node.q_hat * node.q_hat;
    let k0 = node.k_hat;

    let ks = (q2 + perm.eps_xx * xi2).sqrt();
    let rs = (k0 - ks) / (k0 + ks);

    let km = (q2 + perm.eps_v * xi2).sqrt();
    let num = perm.eps_v * k0 - km;
    let den = perm.eps_v * k0 + km;
    let gyro = perm.gyration() * node.q_hat;
    let g2 = gyro * gyro;

    ReflectionProduct {
        rs_prod: rs * rs,
        rp_prod: (num * num + g2) / (den * den + g2),
    }
}

/// Textbook isotropic Fresnel products with scalar permittivity `eps`.
pub fn fresnel_isotropic(eps: f64, node: &WavevectorNode) -> ReflectionProduct {
    let xi2 = node.xi_hat * node.xi_hat;
    let k0 = node.k_hat;
    let k1 = (node.q_hat * node.q_hat + eps * xi2).sqrt();
    let rs = (k0 - k1) / (k0 + k1);
    let rp = (eps * k0 - k1) / (eps * k0 + k1);
    ReflectionProduct {
        rs_prod: rs * rs,
        rp_prod: rp * rp,
    }
}

/// Analytic `ξ → 0` limit of the products at fixed `Q`.
///
/// The diverging Drude response sends `r_p → 1`. For s waves `ε_xx ξ²`
/// vanishes when the carriers are damped (`r_s → 0`) and tends to `ε_L`
/// for an undamped plasma.
pub fn static_limit(spec: &MaterialSpec, q_hat: f64) -> ReflectionProduct {
    match spec.model {
        PlateModel::PerfectConductor => ReflectionProduct::PERFECT,
        _ if spec.gamma_hat > 0.0 => ReflectionProduct {
            rs_prod: 0.0,
            rp_prod: 1.0,
        },
        _ => {
            let ks = (q_hat * q_hat + spec.eps_l).sqrt();
            let rs = (q_hat - ks) / (q_hat + ks);
            ReflectionProduct {
                rs_prod: rs * rs,
                rp_prod: 1.0,
            }
        }
    }
}
