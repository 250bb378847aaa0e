//! Casimir reduction factor between magneto-optic semiconductor plates in the
//! Voigt configuration, and the pull-in stability analysis built on top of it.
//!
//! Everything is dimensionless: frequencies are in units of the plasma
//! frequency `ω_p` and lengths in units of the plasma length `c/ω_p`.
//! Only [`pullin::device`] converts to SI.
//!
//! The pipeline is
//! [`material`] → [`reflectivity`] → [`lifshitz`] → [`pullin`].

pub mod error;
pub mod lifshitz;
pub mod material;
pub mod pullin;
pub mod quadrature;
pub mod reflectivity;

pub use error::{Error, Result};
pub use lifshitz::{eta, eta_curve, EtaCache, EtaPoint, LifshitzEta, QuadratureConfig, ReductionFactor};
pub use material::{MaterialSpec, PermittivitySample, PlateModel};
pub use pullin::{
    bifurcation_curve, field_sweep, find_pullin, solve_equilibria, BifurcationPoint, CurveGrid, Equilibrium,
    PullInResult,
};
pub use reflectivity::{reflection_products, ReflectionProduct, WavevectorNode};
