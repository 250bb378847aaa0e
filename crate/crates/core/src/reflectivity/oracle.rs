//! Finite-slab reflection by direct field matching, used to validate the
//! half-space closed forms.
//!
//! Each polarization block obeys `∂z ψ = i M ψ` for the tangential fields
//! `ψ`: `(E_x, H_y)` for s and `(E_y, H_x)` for p. `M` is assembled here from
//! the raw tensor entries `ε_yy, ε_yz, ε_zy, ε_zz`. The closed forms use `ε_V`
//! instead. The eigenvalues of `M` are the normal wavevectors and the
//! eigenvectors the modal impedances. Continuity of `ψ` at `z = 0` and
//! `z = d` then gives a 4×4 complex system. Backward slab modes are
//! referenced to `z = d`, so every propagation factor is a decaying
//! exponential and thick slabs stay well conditioned.
//!
//! Units: `c = 1`, `ω = iξ`.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C;

use super::{ReflectionProduct, WavevectorNode};
use crate::error::{Error, Result};
use crate::material::{permittivity_at, MaterialSpec, PlateModel};

/// Largest tolerated relative residual of the matching solve.
const RESIDUAL_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
struct Tensor {
    xx: C,
    yy: C,
    yz: C,
    zy: C,
    zz: C,
}

impl Tensor {
    fn vacuum() -> Self {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        Tensor {
            xx: one,
            yy: one,
            yz: zero,
            zy: zero,
            zz: one,
        }
    }
}

type Block = [[C; 2]; 2];

fn s_block(eps: &Tensor, omega: C, q: f64) -> Block {
    let zero = C::new(0.0, 0.0);
    [[zero, omega], [omega * eps.xx - q * q / omega, zero]]
}

fn p_block(eps: &Tensor, omega: C, q: f64) -> Block {
    let m11 = -q * eps.zy / eps.zz;
    let m12 = q * q / (omega * eps.zz) - omega;
    let m21 = -omega * (eps.yy - eps.yz * eps.zy / eps.zz);
    let m22 = -q * eps.yz / eps.zz;
    [[m11, m12], [m21, m22]]
}

/// A normal mode: wavevector along `z` and its tangential field vector,
/// normalized so the second component is 1.
#[derive(Debug, Clone, Copy)]
struct Mode {
    kz: C,
    field: [C; 2],
}

/// Splits a block into its forward (`Im kz > 0`, decaying toward `+z`) and
/// backward modes.
fn modes(m: &Block) -> Result<(Mode, Mode)> {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let roots = [(tr + disc) * 0.5, (tr - disc) * 0.5];
    let (fwd, bwd) = if roots[0].im >= roots[1].im {
        (roots[0], roots[1])
    } else {
        (roots[1], roots[0])
    };
    if !(fwd.im > 0.0 && bwd.im < 0.0) {
        return Err(Error::Invalid(format!(
            "evanescent mode pair expected, got kz = {fwd} and {bwd}"
        )));
    }
    let mode = |kz: C| Mode {
        kz,
        // second row: m21 a + (m22 − kz) = 0
        field: [(kz - m[1][1]) / m[1][0], C::new(1.0, 0.0)],
    };
    Ok((mode(fwd), mode(bwd)))
}

/// Reflection amplitude of a slab of thickness `d` in vacuum for one block.
fn slab_amplitude(vac: &Block, slab: &Block, d: f64) -> Result<C> {
    let (v_in, v_out) = modes(vac)?;
    let (s_fwd, s_bwd) = modes(slab)?;
    let i = C::new(0.0, 1.0);
    let zero = C::new(0.0, 0.0);
    let fwd_decay = (i * s_fwd.kz * d).exp();
    let bwd_decay = (-i * s_bwd.kz * d).exp();

    // unknowns: [r, A, B, T]
    // z = 0: v_in + r v_out = A s_fwd + B e^{-i k_b d} s_bwd
    // z = d: A e^{i k_f d} s_fwd + B s_bwd = T v_in
    let mut a = Matrix4::<C>::zeros();
    let mut b = Vector4::<C>::zeros();
    for c in 0..2 {
        a[(c, 0)] = v_out.field[c];
        a[(c, 1)] = -s_fwd.field[c];
        a[(c, 2)] = -s_bwd.field[c] * bwd_decay;
        a[(c, 3)] = zero;
        b[c] = -v_in.field[c];

        a[(c + 2, 0)] = zero;
        a[(c + 2, 1)] = s_fwd.field[c] * fwd_decay;
        a[(c + 2, 2)] = s_bwd.field[c];
        a[(c + 2, 3)] = -v_in.field[c];
        b[c + 2] = zero;
    }

    let x = a.lu().solve(&b).ok_or(Error::PrecisionLoss {
        residual: f64::INFINITY,
    })?;
    let residual = (a * x - b).norm() / b.norm();
    if residual.is_nan() || residual > RESIDUAL_LIMIT || !x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::PrecisionLoss { residual });
    }
    Ok(x[0])
}

/// Reflection products of two facing slabs of thickness `thickness_hat`
/// (plasma units), each backed by vacuum.
///
/// The second plate is the mirror image of the first, so its off-diagonal
/// tensor entries enter with the opposite sign. The returned products are
/// the real parts. The imaginary parts cancel to rounding.
pub fn transfer_matrix_oracle(
    spec: &MaterialSpec,
    node: &WavevectorNode,
    thickness_hat: f64,
) -> Result<ReflectionProduct> {
    if !(thickness_hat >= 0.0 && thickness_hat.is_finite()) {
        return Err(Error::Domain {
            name: "thickness_hat",
            value: thickness_hat,
            requirement: "must be finite and >= 0",
        });
    }
    super::check_node(node)?;
    if spec.model == PlateModel::PerfectConductor {
        return Ok(ReflectionProduct::PERFECT);
    }
    let perm = permittivity_at(spec, node.xi_hat)?;
    let omega = C::new(0.0, node.xi_hat);
    let q = node.q_hat;

    let plate = |sign: f64| Tensor {
        xx: C::new(perm.eps_xx, 0.0),
        yy: C::new(perm.eps_yy, 0.0),
        yz: C::new(sign * perm.eps_yz, 0.0),
        zy: C::new(-sign * perm.eps_yz, 0.0),
        zz: C::new(perm.eps_yy, 0.0),
    };
    let vac = Tensor::vacuum();

    let mut prods = [C::new(1.0, 0.0); 2];
    for sign in [1.0, -1.0] {
        let eps = plate(sign);
        prods[0] *= slab_amplitude(&s_block(&vac, omega, q), &s_block(&eps, omega, q), thickness_hat)?;
        prods[1] *= slab_amplitude(&p_block(&vac, omega, q), &p_block(&eps, omega, q), thickness_hat)?;
    }
    for p in &prods {
        if p.im.abs() > 1e-10 * p.norm().max(1e-300) {
            return Err(Error::PrecisionLoss {
                residual: p.im.abs() / p.norm(),
            });
        }
    }
    Ok(ReflectionProduct {
        rs_prod: prods[0].re,
        rp_prod: prods[1].re,
    })
}

/// Decay constants `(κ_s, κ_m)` inside the slab; thickness is expressed in
/// multiples of `1/min(κ_s, κ_m)` when comparing against half-spaces.
pub fn slab_decay_constants(spec: &MaterialSpec, node: &WavevectorNode) -> Result<(f64, f64)> {
    let perm = permittivity_at(spec, node.xi_hat)?;
    let xi2 = node.xi_hat * node.xi_hat;
    let q2 = node.q_hat * node.q_hat;
    Ok(((q2 + perm.eps_xx * xi2).sqrt(), (q2 + perm.eps_v * xi2).sqrt()))
}
