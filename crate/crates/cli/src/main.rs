//! `voigt-casimir`: η tables, bifurcation curves and pull-in sweeps for
//! magneto-optic plates, written as CSV or JSON.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, INSET_FIELDS, INSET_FRACTION};
use config::{DeviceConfig, Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "voigt-casimir", version = output::BUILD, about = "Casimir reduction factor and pull-in analysis for magneto-optic plates")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Config file (key = value sections, or a JSON output of this tool).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Relative tolerance of the η quadrature.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Run on a single thread.
    #[arg(long, global = true)]
    serial: bool,
    /// Exit 0 even if some points did not converge.
    #[arg(long, global = true)]
    allow_partial: bool,
    /// drude-magneto, isotropic or perfect.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true)]
    eps_l: Option<f64>,
    /// Damping γ/ω_p.
    #[arg(long, global = true)]
    gamma: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct CurveArgs {
    /// Initial gap in plasma lengths.
    #[arg(long = "L0", allow_negative_numbers = true)]
    l0: Option<f64>,
    /// Cyclotron ratios ω_c/ω_p.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    fields: Option<Vec<f64>>,
    /// Bifurcation grid size (at least 3).
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduction factor η over separations and fields.
    Eta {
        /// Separations in plasma lengths.
        #[arg(long = "L", value_delimiter = ',', allow_negative_numbers = true)]
        l: Option<Vec<f64>>,
        /// Cyclotron ratios ω_c/ω_p.
        #[arg(
            long = "omega-c",
            alias = "fields",
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        omega_c: Option<Vec<f64>>,
        /// η at 0.8·L0 for fields 0,1,2,5,6.
        #[arg(long)]
        inset: bool,
        #[arg(long = "L0", allow_negative_numbers = true)]
        l0: Option<f64>,
    },
    /// λ(z̄) curves and their folds.
    Bifurcation {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_negative_numbers = true)]
        z_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z_max: Option<f64>,
        /// Add the perfect-conductor curve.
        #[arg(long)]
        reference: bool,
        /// Hold η at its value at 0.8·L0.
        #[arg(long)]
        fixed_eta: bool,
    },
    /// Pull-in point per field with stiffness and detachment ratios.
    PullinSweep {
        #[command(flatten)]
        curve: CurveArgs,
        /// E=..,w=..,t=..,l=..,L0=..[,A=..][,omega_p=..] in SI units.
        #[arg(long)]
        device: Option<String>,
    },
    /// SI stiffness, force and detachment length of a cantilever.
    Device {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        device: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eta { .. } => "eta",
            Command::Bifurcation { .. } => "bifurcation",
            Command::PullinSweep { .. } => "pullin-sweep",
            Command::Device { .. } => "device",
        }
    }
}

fn apply_curve(cfg: &mut RunConfig, c: &CurveArgs) {
    if let Some(l0) = c.l0 {
        cfg.sweep.l0_hat = l0;
    }
    if let Some(f) = &c.fields {
        cfg.sweep.fields = f.clone();
    }
    if let Some(n) = c.points {
        cfg.sweep.points = n;
    }
}

fn apply_device(cfg: &mut RunConfig, spec: &Option<String>) -> Result<(), CliError> {
    if let Some(s) = spec {
        cfg.merge_device(&DeviceConfig::parse_compact(s)?);
    }
    if !cfg.device.is_empty() && cfg.device.omega_p.is_some() {
        cfg.sweep.l0_hat = cfg.device_scale()?.0;
    }
    Ok(())
}

/// Defaults, then the config file, then flags.
fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let c = &cli.common;
    if let Some(path) = &c.config {
        cfg.apply_file(path)?;
    }
    if let Some(out) = &c.out {
        cfg.out = Some(out.clone());
    }
    if let Some(f) = &c.format {
        cfg.format = Format::parse(f).ok_or_else(|| CliError::validation(format!("unknown format '{f}'")))?;
    }
    if let Some(t) = c.rel_tol {
        cfg.quadrature.rel_tol = t;
    }
    if let Some(m) = &c.model {
        cfg.material.model = m
            .parse()
            .map_err(|e: voigt_casimir::Error| CliError::validation(e.to_string()))?;
    }
    if let Some(e) = c.eps_l {
        cfg.material.eps_l = e;
    }
    if let Some(g) = c.gamma {
        cfg.material.gamma_hat = g;
    }

    match &cli.command {
        Command::Eta { l, omega_c, inset, l0 } => {
            if let Some(l0) = l0 {
                cfg.sweep.l0_hat = *l0;
            }
            if *inset {
                cfg.sweep.separations = vec![INSET_FRACTION * cfg.sweep.l0_hat];
                cfg.sweep.fields = INSET_FIELDS.to_vec();
            }
            if let Some(l) = l {
                cfg.sweep.separations = l.clone();
            }
            if let Some(w) = omega_c {
                cfg.sweep.fields = w.clone();
            }
        }
        Command::Bifurcation {
            curve,
            z_min,
            z_max,
            reference,
            fixed_eta,
        } => {
            apply_curve(&mut cfg, curve);
            if let Some(z) = z_min {
                cfg.sweep.z_min = *z;
            }
            if let Some(z) = z_max {
                cfg.sweep.z_max = *z;
            }
            cfg.sweep.reference |= *reference;
            cfg.sweep.fixed_eta |= *fixed_eta;
        }
        Command::PullinSweep { curve, device } | Command::Device { curve, device } => {
            apply_curve(&mut cfg, curve);
            apply_device(&mut cfg, device)?;
        }
    }
    commands::normalize_fields(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    if cli.common.serial {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build_global()
            .map_err(|e| CliError::validation(format!("cannot configure serial mode: {e}")))?;
    }
    let outcome = match &cli.command {
        Command::Eta { .. } => commands::eta(&cfg)?,
        Command::Bifurcation { .. } => commands::bifurcation(&cfg)?,
        Command::PullinSweep { .. } => commands::pullin_sweep(&cfg)?,
        Command::Device { .. } => commands::device(&cfg)?,
    };
    let text = output::render(&outcome.table, &cfg, cli.command.name());
    match &cfg.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::validation(format!("cannot write output: {e}")))?;
        }
    }
    if !outcome.converged && !cli.common.allow_partial {
        return Err(CliError::numerical(
            "some points did not reach the requested tolerance (rerun with --allow-partial to accept)",
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
