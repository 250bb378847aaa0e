//! SI translation of a dimensionless pull-in result for a rectangular
//! cantilever, `κ = E w t³ / (4 l³)`.

use super::PullInResult;
use crate::error::{positive, Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Cantilever dimensions in SI units. The plate area is independent of the
/// beam length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantileverGeometry {
    /// Young's modulus, Pa.
    pub youngs_modulus: f64,
    pub width: f64,
    pub thickness: f64,
    pub length: f64,
    /// Initial gap `L₀`.
    pub gap: f64,
    /// Plate area `A`, m².
    pub area: f64,
}

impl CantileverGeometry {
    pub fn validate(&self) -> Result<()> {
        positive("youngs_modulus", self.youngs_modulus)?;
        positive("width", self.width)?;
        positive("thickness", self.thickness)?;
        positive("length", self.length)?;
        positive("gap", self.gap)?;
        positive("area", self.area)?;
        if self.thickness > self.width {
            return Err(Error::Invalid(format!(
                "thickness {} exceeds width {}",
                self.thickness, self.width
            )));
        }
        Ok(())
    }

    pub fn stiffness(&self) -> f64 {
        self.youngs_modulus * self.width * self.thickness.powi(3) / (4.0 * self.length.powi(3))
    }

    /// Perfect-conductor Casimir force at the initial gap, N.
    pub fn casimir_force(&self) -> f64 {
        std::f64::consts::PI.powi(2) * HBAR * SPEED_OF_LIGHT * self.area / (240.0 * self.gap.powi(4))
    }

    /// `λ = F₀(L₀)/(κ L₀)`.
    pub fn lambda(&self) -> f64 {
        self.casimir_force() / (self.stiffness() * self.gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceReport {
    /// Spring constant, N/m.
    pub kappa: f64,
    /// `F₀(L₀)`, N.
    pub f0: f64,
    pub lambda: f64,
    pub lambda_in: f64,
    /// Longest beam of the same cross-section and plate area that stays
    /// below the fold, m.
    pub detach_length_max: f64,
    /// `L₀ ω_p / c` for the supplied plasma frequency.
    pub l0_hat: f64,
    /// The device as given is beyond the fold.
    pub pull_in: bool,
}

/// `omega_p` is the plasma frequency in rad/s; it fixes the plasma length
/// that relates `geom.gap` to the dimensionless separation.
pub fn device_translate(geom: &CantileverGeometry, result: &PullInResult, omega_p: f64) -> Result<DeviceReport> {
    geom.validate()?;
    positive("omega_p", omega_p)?;
    let kappa = geom.stiffness();
    let f0 = geom.casimir_force();
    let lambda = f0 / (kappa * geom.gap);
    // λ ∝ l³ at fixed cross-section and area.
    let detach_length_max = geom.length * (result.lambda_in / lambda).cbrt();
    Ok(DeviceReport {
        kappa,
        f0,
        lambda,
        lambda_in: result.lambda_in,
        detach_length_max,
        l0_hat: geom.gap * omega_p / SPEED_OF_LIGHT,
        pull_in: lambda > result.lambda_in,
    })
}
