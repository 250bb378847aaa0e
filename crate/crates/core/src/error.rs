use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("{name} = {value} is outside the domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("perfect-conductor plates have no finite permittivity")]
    NoPermittivity,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// The field-matching system could not be solved to working precision.
    #[error("transfer-matrix solve lost precision (relative residual {residual:.3e})")]
    PrecisionLoss { residual: f64 },

    /// λ at or beyond the fold: the plate snaps down, there is no equilibrium.
    #[error("no equilibrium for lambda = {lambda} (pull-in at lambda_in = {lambda_in})")]
    NoEquilibrium { lambda: f64, lambda_in: f64 },

    /// The sampled bifurcation curve has more than one interior maximum.
    #[error("sampled bifurcation curve is not unimodal ({} samples)", .grid.len())]
    NotUnimodal { grid: Vec<(f64, f64)> },

    #[error("field sweep has no baseline entry at omega_c_hat = {0}")]
    MissingBaseline(f64),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            requirement: "must be finite and > 0",
        })
    }
}
