use std::sync::Arc;

use rayon::prelude::*;
use voigt_casimir::lifshitz::ConstantEta;
use voigt_casimir::pullin::device_translate;
use voigt_casimir::{
    bifurcation_curve, field_sweep, find_pullin, Error, EtaCache, LifshitzEta, PlateModel, PullInResult,
    ReductionFactor,
};

use crate::config::{ConfigError, RunConfig};
use crate::output::{Cell, Table};

/// Separation of the fixed-separation `η` preset, as a fraction of `L₀`.
pub const INSET_FRACTION: f64 = 0.8;
pub const INSET_FIELDS: [f64; 5] = [0.0, 1.0, 2.0, 5.0, 6.0];

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionLoss { .. } | Error::NonFinite(_) | Error::NotUnimodal { .. } => {
                CliError::numerical(e.to_string())
            }
            _ => CliError::validation(e.to_string()),
        }
    }
}

/// A computed table plus whether every number in it converged.
pub struct Outcome {
    pub table: Table,
    pub converged: bool,
}

/// Non-magnetic models ignore the field, so a sweep collapses to one entry.
pub fn normalize_fields(cfg: &mut RunConfig) {
    if cfg.material.model != PlateModel::DrudeMagneto {
        cfg.sweep.fields = vec![0.0];
        cfg.sweep.baseline = 0.0;
    }
}

fn source(cfg: &RunConfig, field: f64, cache: &Arc<EtaCache>) -> LifshitzEta {
    LifshitzEta::new(cfg.material.with_field(field), cfg.quadrature).with_cache(cache.clone())
}

pub fn eta(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let jobs: Vec<(f64, f64)> = cfg
        .sweep
        .fields
        .iter()
        .flat_map(|&w| cfg.sweep.separations.iter().map(move |&l| (w, l)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(w, l)| voigt_casimir::eta(&cfg.material.with_field(w), l, &cfg.quadrature))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&["L_hat", "omega_c_hat", "eta", "err_est", "converged"]);
    for (&(w, _), p) in jobs.iter().zip(&points) {
        table.push(vec![
            p.l_hat.into(),
            w.into(),
            p.eta.into(),
            p.err_est.into(),
            p.converged.into(),
        ]);
    }
    Ok(Outcome {
        table,
        converged: points.iter().all(|p| p.converged),
    })
}

fn curve_rows(table: &mut Table, label: Cell, src: &dyn ReductionFactor, cfg: &RunConfig) -> Result<bool, CliError> {
    let grid = cfg.sweep.grid();
    let curve = bifurcation_curve(src, cfg.sweep.l0_hat, &grid)?;
    let pin = find_pullin(src, cfg.sweep.l0_hat, &grid)?;
    for p in &curve {
        table.push(vec![label.clone(), p.z_bar.into(), p.lambda.into(), p.eta_at.into()]);
    }
    table.push_summary(vec![
        label,
        pin.z_bar_in.into(),
        pin.lambda_in.into(),
        pin.eta_in.into(),
        pin.converged.into(),
    ]);
    Ok(pin.converged && curve.iter().all(|p| p.converged))
}

pub fn bifurcation(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cache = Arc::new(EtaCache::default());
    let l0 = cfg.sweep.l0_hat;
    // Fixed-eta mode holds the value at the inset separation for the whole curve.
    let sources: Vec<(Box<dyn ReductionFactor + Send>, bool)> = cfg
        .sweep
        .fields
        .par_iter()
        .map(|&w| -> Result<(Box<dyn ReductionFactor + Send>, bool), CliError> {
            let full = source(cfg, w, &cache);
            if cfg.sweep.fixed_eta {
                let p = full.eta_at(INSET_FRACTION * l0)?;
                let fixed = ConstantEta {
                    eta: p.eta,
                    omega_c_hat: w,
                };
                Ok((Box::new(fixed), p.converged))
            } else {
                Ok((Box::new(full), true))
            }
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(&["omega_c_hat", "z_bar", "lambda", "eta_at"]);
    table.summary_columns = vec!["omega_c_hat", "z_bar_in", "lambda_in", "eta_in", "converged"];
    let mut converged = true;
    for (&w, (src, ok)) in cfg.sweep.fields.iter().zip(&sources) {
        converged &= *ok;
        converged &= curve_rows(&mut table, w.into(), src.as_ref(), cfg)?;
    }
    if cfg.sweep.reference {
        curve_rows(&mut table, "perfect".into(), &ConstantEta::new(1.0), cfg)?;
    }
    Ok(Outcome { table, converged })
}

pub fn pullin_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cache = Arc::new(EtaCache::default());
    let results = field_sweep(
        &cfg.material,
        cfg.sweep.l0_hat,
        &cfg.sweep.fields,
        &cfg.quadrature,
        &cfg.sweep.grid(),
        cfg.sweep.baseline,
        Some(cache),
    )?;
    let mut columns = vec![
        "omega_c_hat",
        "z_bar_in",
        "lambda_in",
        "kappa_min_ratio",
        "detach_ratio",
    ];
    let device = if cfg.device.is_empty() {
        None
    } else {
        columns.extend(["kappa", "F0", "lambda_device", "detach_length_max", "pull_in"]);
        Some((cfg.device.geometry()?, cfg.device_scale()?.1))
    };
    let mut table = Table::new(&columns);
    for r in &results {
        let mut row: Vec<Cell> = vec![
            r.omega_c_hat.into(),
            r.z_bar_in.into(),
            r.lambda_in.into(),
            r.kappa_min_ratio.unwrap_or(f64::NAN).into(),
            r.detach_ratio.unwrap_or(f64::NAN).into(),
        ];
        if let Some((geom, omega_p)) = &device {
            let d = device_translate(geom, r, *omega_p)?;
            row.extend([
                d.kappa.into(),
                d.f0.into(),
                d.lambda.into(),
                d.detach_length_max.into(),
                d.pull_in.into(),
            ]);
        }
        table.push(row);
    }
    Ok(Outcome {
        table,
        converged: results.iter().all(|r| r.converged),
    })
}

pub fn device(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.device.is_empty() {
        return Err(CliError::validation(
            "device: no geometry given (use --device or a [device] section)",
        ));
    }
    let geom = cfg.device.geometry()?;
    let (_, omega_p) = cfg.device_scale()?;
    let cache = Arc::new(EtaCache::default());
    let grid = cfg.sweep.grid();
    let results: Vec<PullInResult> = cfg
        .sweep
        .fields
        .par_iter()
        .map(|&w| find_pullin(&source(cfg, w, &cache), cfg.sweep.l0_hat, &grid))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(&[
        "omega_c_hat",
        "kappa",
        "F0",
        "lambda",
        "lambda_in",
        "detach_length_max",
        "pull_in",
    ]);
    for r in &results {
        let d = device_translate(&geom, r, omega_p)?;
        table.push(vec![
            r.omega_c_hat.into(),
            d.kappa.into(),
            d.f0.into(),
            d.lambda.into(),
            d.lambda_in.into(),
            d.detach_length_max.into(),
            d.pull_in.into(),
        ]);
    }
    Ok(Outcome {
        table,
        converged: results.iter().all(|r| r.converged),
    })
}
