//! Magneto-optic dielectric tensor of a doped semiconductor on the imaginary
//! frequency axis.
//!
//! The field `B` lies along `x`, parallel to the plates. The Drude tensor then
//! has `ε_xx`, `ε_yy = ε_zz` and `ε_yz = −ε_zy` as its only non-zero
//! components, so only `ε_xx`, `ε_yy` and `ε_yz` are stored. After the
//! substitution `ω → iξ` all of them are real:
//!
//! ```text
//! ε_xx = ε_L [1 + 1/(ξ(ξ+γ))]
//! ε_yy = ε_L [1 + (ξ+γ)/(ξ((ξ+γ)² + Ω²))]
//! ε_yz = −ε_L Ω/(ξ((ξ+γ)² + Ω²))
//! ```
//!
//! with `ξ`, `γ`, `Ω` in units of `ω_p`.

use crate::error::{Error, Result};

/// Which plate model the reflection amplitudes are computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlateModel {
    /// Drude carriers in a static magnetic field (Voigt geometry).
    DrudeMagneto,
    /// Drude carriers without field; `omega_c_hat` is ignored.
    Isotropic,
    /// Ideal metal, `r = 1` for both polarizations; all other fields ignored.
    PerfectConductor,
}

impl PlateModel {
    pub fn name(self) -> &'static str {
        match self {
            PlateModel::DrudeMagneto => "drude-magneto",
            PlateModel::Isotropic => "isotropic",
            PlateModel::PerfectConductor => "perfect-conductor",
        }
    }
}

impl std::str::FromStr for PlateModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "drude-magneto" | "drude" | "voigt" => Ok(PlateModel::DrudeMagneto),
            "isotropic" => Ok(PlateModel::Isotropic),
            "perfect-conductor" | "perfect" => Ok(PlateModel::PerfectConductor),
            other => Err(Error::Invalid(format!(
                "unknown plate model '{other}' (expected drude-magneto, isotropic or perfect-conductor)"
            ))),
        }
    }
}

impl std::fmt::Display for PlateModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Dimensionless material and field parameters of one plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    /// Background permittivity `ε_L`.
    pub eps_l: f64,
    /// Damping `γ/ω_p`.
    pub gamma_hat: f64,
    /// Cyclotron ratio `Ω_c = ω_c/ω_p`.
    pub omega_c_hat: f64,
    pub model: PlateModel,
}

impl Default for MaterialSpec {
    /// InSb-like defaults: `ε_L = 15.7`, `γ/ω_p = 0.01`, no field.
    fn default() -> Self {
        MaterialSpec {
            eps_l: 15.7,
            gamma_hat: 0.01,
            omega_c_hat: 0.0,
            model: PlateModel::DrudeMagneto,
        }
    }
}

impl MaterialSpec {
    pub fn drude(eps_l: f64, gamma_hat: f64, omega_c_hat: f64) -> Self {
        MaterialSpec {
            eps_l,
            gamma_hat,
            omega_c_hat,
            model: PlateModel::DrudeMagneto,
        }
    }

    pub fn isotropic(eps_l: f64, gamma_hat: f64) -> Self {
        MaterialSpec {
            eps_l,
            gamma_hat,
            omega_c_hat: 0.0,
            model: PlateModel::Isotropic,
        }
    }

    pub fn perfect_conductor() -> Self {
        MaterialSpec {
            model: PlateModel::PerfectConductor,
            ..MaterialSpec::default()
        }
    }

    pub fn with_field(self, omega_c_hat: f64) -> Self {
        MaterialSpec { omega_c_hat, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.model == PlateModel::PerfectConductor {
            return Ok(());
        }
        if !(self.eps_l >= 1.0 && self.eps_l.is_finite()) {
            return Err(Error::Domain {
                name: "eps_L",
                value: self.eps_l,
                requirement: "must be finite and >= 1",
            });
        }
        if !(self.gamma_hat >= 0.0 && self.gamma_hat.is_finite()) {
            return Err(Error::Domain {
                name: "gamma_hat",
                value: self.gamma_hat,
                requirement: "must be finite and >= 0",
            });
        }
        if !(self.omega_c_hat >= 0.0 && self.omega_c_hat.is_finite()) {
            return Err(Error::Domain {
                name: "omega_c_hat",
                value: self.omega_c_hat,
                requirement: "must be finite and >= 0",
            });
        }
        Ok(())
    }

    /// The cyclotron ratio the tensor actually sees (zero for isotropic plates).
    pub fn effective_field(&self) -> f64 {
        match self.model {
            PlateModel::DrudeMagneto => self.omega_c_hat,
            _ => 0.0,
        }
    }
}

/// Wick-rotated tensor components at one imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermittivitySample {
    pub xi_hat: f64,
    pub eps_xx: f64,
    pub eps_yy: f64,
    /// Off-diagonal `ε_yz`; `ε_zy = −ε_yz`.
    pub eps_yz: f64,
    /// Voigt permittivity `ε_yy + ε_yz²/ε_yy` seen by p-polarized waves.
    pub eps_v: f64,
}

impl PermittivitySample {
    /// An isotropic sample with scalar permittivity `eps` in every diagonal slot.
    pub fn scalar(xi_hat: f64, eps: f64) -> Self {
        PermittivitySample {
            xi_hat,
            eps_xx: eps,
            eps_yy: eps,
            eps_yz: 0.0,
            eps_v: eps,
        }
    }

    /// Gyrotropy ratio `ε_yz/ε_yy`.
    pub fn gyration(&self) -> f64 {
        self.eps_yz / self.eps_yy
    }
}

fn check_xi(xi_hat: f64) -> Result<()> {
    if xi_hat > 0.0 && xi_hat.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "xi_hat",
            value: xi_hat,
            requirement: "imaginary frequency must be finite and > 0",
        })
    }
}

/// Evaluates the dielectric tensor at `ω = iξ`.
///
/// Fails for perfect-conductor plates, which have no finite permittivity.
pub fn permittivity_at(spec: &MaterialSpec, xi_hat: f64) -> Result<PermittivitySample> {
    check_xi(xi_hat)?;
    if spec.model == PlateModel::PerfectConductor {
        return Err(Error::NoPermittivity);
    }
    let eps_l = spec.eps_l;
    let damped = xi_hat + spec.gamma_hat;
    let omega_c = spec.effective_field();

    let eps_xx = eps_l * (1.0 + 1.0 / (xi_hat * damped));
    let (eps_yy, eps_yz) = if omega_c == 0.0 {
        (eps_xx, 0.0)
    } else {
        let denom = xi_hat * (damped * damped + omega_c * omega_c);
        (eps_l * (1.0 + damped / denom), -eps_l * omega_c / denom)
    };
    let eps_v = eps_yy + eps_yz * eps_yz / eps_yy;

    let sample = PermittivitySample {
        xi_hat,
        eps_xx,
        eps_yy,
        eps_yz,
        eps_v,
    };
    if [eps_xx, eps_yy, eps_yz, eps_v].iter().all(|v| v.is_finite()) {
        Ok(sample)
    } else {
        Err(Error::NonFinite("permittivity"))
    }
}

/// Scalar Drude permittivity `ε_L[1 + 1/(ξ(ξ+γ))]`, the zero-field tensor.
pub fn isotropic_permittivity_at(spec: &MaterialSpec, xi_hat: f64) -> Result<f64> {
    check_xi(xi_hat)?;
    if spec.model == PlateModel::PerfectConductor {
        return Err(Error::NoPermittivity);
    }
    Ok(spec.eps_l * (1.0 + 1.0 / (xi_hat * (xi_hat + spec.gamma_hat))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_field_unit_background() {
        let s = permittivity_at(&MaterialSpec::drude(1.0, 0.0, 0.0), 1.0).unwrap();
        assert_eq!(s.eps_xx, 2.0);
        assert_eq!(s.eps_yy, 2.0);
        assert_eq!(s.eps_v, 2.0);
        assert_eq!(s.eps_yz, 0.0);
    }

    #[test]
    fn unit_field_unit_background() {
        let s = permittivity_at(&MaterialSpec::drude(1.0, 0.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(s.eps_xx, 2.0, epsilon = 1e-15);
        assert_relative_eq!(s.eps_yy, 1.5, epsilon = 1e-15);
        assert_relative_eq!(s.eps_yz, -0.5, epsilon = 1e-15);
        assert_relative_eq!(s.eps_v, 1.5 + 0.25 / 1.5, epsilon = 1e-15);
    }

    /// Rotates the real-frequency tensor numerically with complex arithmetic at
    /// `ω = iξ` and compares against the closed real forms.
    #[test]
    fn closed_forms_match_complex_rotation() {
        use num_complex::Complex64 as C;
        let (eps_l, gamma, omega_c) = (15.7, 0.1, 1.3);
        for &xi in &[0.05, 0.5, 2.0, 30.0] {
            let w = C::new(0.0, xi);
            let wg = w + C::new(0.0, gamma);
            let oc = C::new(omega_c, 0.0);
            let xx = eps_l * (C::new(1.0, 0.0) - 1.0 / (w * wg));
            let yy = eps_l * (C::new(1.0, 0.0) - wg / (w * (wg * wg - oc * oc)));
            let yz = eps_l * (C::new(0.0, omega_c) / (w * (wg * wg - oc * oc)));
            let s = permittivity_at(&MaterialSpec::drude(eps_l, gamma, omega_c), xi).unwrap();
            for (z, r) in [(xx, s.eps_xx), (yy, s.eps_yy), (yz, s.eps_yz)] {
                assert!(z.im.abs() <= 1e-12 * z.norm());
                assert_relative_eq!(z.re, r, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn insb_like_hand_values() {
        let s = permittivity_at(&MaterialSpec::drude(15.7, 0.1, 0.0), 0.5).unwrap();
        assert_relative_eq!(s.eps_xx, 15.7 * (1.0 + 1.0 / 0.3), max_relative = 1e-14);
        assert_relative_eq!(s.eps_xx, 68.03333333333333, max_relative = 1e-12);

        let e = isotropic_permittivity_at(&MaterialSpec::isotropic(15.7, 0.01), 0.1).unwrap();
        assert_relative_eq!(e, 15.7 * (1.0 + 1.0 / 0.011), max_relative = 1e-14);
        assert!((e - 1443.0).abs() < 0.05);
    }

    #[test]
    fn isotropic_matches_xx_for_any_field() {
        let e = isotropic_permittivity_at(&MaterialSpec::isotropic(1.0, 0.0), 1.0).unwrap();
        assert_eq!(e, 2.0);
        for oc in [0.0, 1.0, 6.0] {
            let spec = MaterialSpec::drude(3.0, 0.2, oc);
            let s = permittivity_at(&spec, 0.7).unwrap();
            assert_eq!(isotropic_permittivity_at(&spec, 0.7).unwrap(), s.eps_xx);
        }
        let far = isotropic_permittivity_at(&MaterialSpec::isotropic(1.0, 0.0), 1e8).unwrap();
        assert_relative_eq!(far, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn isotropic_model_ignores_field() {
        let mut spec = MaterialSpec::isotropic(15.7, 0.01);
        spec.omega_c_hat = 4.0;
        let s = permittivity_at(&spec, 0.3).unwrap();
        assert_eq!(s.eps_yz, 0.0);
        assert_eq!(s.eps_v, s.eps_xx);
    }

    #[test]
    fn domain_errors() {
        let spec = MaterialSpec::default();
        assert!(matches!(permittivity_at(&spec, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(permittivity_at(&spec, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(
            isotropic_permittivity_at(&spec, 0.0),
            Err(Error::Domain { .. })
        ));
        assert_eq!(
            permittivity_at(&MaterialSpec::perfect_conductor(), 1.0),
            Err(Error::NoPermittivity)
        );
        assert!(MaterialSpec::drude(0.5, 0.0, 0.0).validate().is_err());
        assert!(MaterialSpec::drude(1.0, -0.1, 0.0).validate().is_err());
        assert!(MaterialSpec::drude(1.0, 0.1, -2.0).validate().is_err());
    }

    #[test]
    fn divergence_rates_at_small_frequency() {
        // 1/ξ with damping, 1/ξ² without.
        let damped = MaterialSpec::drude(1.0, 0.1, 0.0);
        let plasma = MaterialSpec::drude(1.0, 0.0, 0.0);
        for &xi in &[1e-5, 1e-6, 1e-7] {
            let d = permittivity_at(&damped, xi).unwrap().eps_xx * xi;
            let p = permittivity_at(&plasma, xi).unwrap().eps_xx * xi * xi;
            assert_relative_eq!(d, 1.0 / 0.1, max_relative = 1e-3);
            assert_relative_eq!(p, 1.0, max_relative = 1e-3);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn spec_strategy() -> impl Strategy<Value = MaterialSpec> {
            (1.0f64..30.0, 0.0f64..1.0, 0.0f64..8.0).prop_map(|(e, g, w)| MaterialSpec::drude(e, g, w))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ordering_and_bounds(spec in spec_strategy(), log_xi in -4.0f64..3.0) {
                let xi = 10f64.powf(log_xi);
                let s = permittivity_at(&spec, xi).unwrap();
                prop_assert!(s.eps_xx > spec.eps_l);
                prop_assert!(s.eps_yy > spec.eps_l);
                prop_assert!(s.eps_yy <= s.eps_xx * (1.0 + 1e-15));
                prop_assert!(s.eps_v >= s.eps_yy);
                prop_assert!(s.eps_v >= 1.0);
                if spec.omega_c_hat > 0.0 {
                    prop_assert!(s.eps_yy < s.eps_xx);
                }
            }

            #[test]
            fn field_ordering(spec in spec_strategy(), xi in 0.01f64..10.0, extra in 0.01f64..4.0) {
                let lo = permittivity_at(&spec, xi).unwrap();
                let hi = permittivity_at(&spec.with_field(spec.omega_c_hat + extra), xi).unwrap();
                prop_assert_eq!(lo.eps_xx, hi.eps_xx);
                prop_assert!(hi.eps_yy <= lo.eps_yy);
            }

            #[test]
            fn zero_field_collapse(e in 1.0f64..30.0, g in 0.0f64..1.0, xi in 1e-4f64..1e3) {
                let s = permittivity_at(&MaterialSpec::drude(e, g, 0.0), xi).unwrap();
                prop_assert_eq!(s.eps_yz, 0.0);
                prop_assert_eq!(s.eps_v, s.eps_xx);
                prop_assert_eq!(s.eps_yy, s.eps_xx);
            }
        }
    }

    #[test]
    fn approaches_background_at_high_frequency() {
        let spec = MaterialSpec::drude(15.7, 0.01, 3.0);
        let mut prev = f64::INFINITY;
        for k in 0..8 {
            let xi = 10f64.powi(k - 2);
            let s = permittivity_at(&spec, xi).unwrap();
            assert!(s.eps_xx < prev);
            prev = s.eps_xx;
        }
        let s = permittivity_at(&spec, 1e6).unwrap();
        for v in [s.eps_xx, s.eps_yy, s.eps_v] {
            assert_relative_eq!(v, 15.7, max_relative = 1e-10);
        }
    }
}
