//! Run configuration: defaults, then a `key = value` file with `[section]`
//! headers, then command-line overrides.
//!
//! The same section/key vocabulary is written back into every output file,
//! so a JSON output can be fed to `--config` to repeat the run.

use std::fmt;
use std::path::{Path, PathBuf};

use voigt_casimir::pullin::device::SPEED_OF_LIGHT;
use voigt_casimir::pullin::CantileverGeometry;
use voigt_casimir::{CurveGrid, MaterialSpec, PlateModel, QuadratureConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(location: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        location: location.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s.trim() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub fields: Vec<f64>,
    pub separations: Vec<f64>,
    pub l0_hat: f64,
    pub points: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub reference: bool,
    pub fixed_eta: bool,
    pub baseline: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let grid = CurveGrid::default();
        SweepConfig {
            fields: vec![0.0, 1.0, 2.0, 5.0, 6.0],
            separations: vec![1.0],
            l0_hat: 1.0,
            points: grid.n_points,
            z_min: grid.z_min,
            z_max: grid.z_max,
            reference: false,
            fixed_eta: false,
            baseline: 0.0,
        }
    }
}

impl SweepConfig {
    pub fn grid(&self) -> CurveGrid {
        CurveGrid {
            z_min: self.z_min,
            z_max: self.z_max,
            n_points: self.points,
        }
    }
}

/// Cantilever description in SI units. `area` defaults to `length·width`;
/// `omega_p` (rad/s), when set, fixes the dimensionless gap.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeviceConfig {
    pub youngs_modulus: Option<f64>,
    pub width: Option<f64>,
    pub thickness: Option<f64>,
    pub length: Option<f64>,
    pub gap: Option<f64>,
    pub area: Option<f64>,
    pub omega_p: Option<f64>,
}

impl DeviceConfig {
    pub fn is_empty(&self) -> bool {
        *self == DeviceConfig::default()
    }

    pub fn geometry(&self) -> Result<CantileverGeometry, ConfigError> {
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| err("device", format!("missing key '{key}'")));
        let width = need(self.width, "width")?;
        let length = need(self.length, "length")?;
        let geom = CantileverGeometry {
            youngs_modulus: need(self.youngs_modulus, "youngs_modulus")?,
            width,
            thickness: need(self.thickness, "thickness")?,
            length,
            gap: need(self.gap, "gap")?,
            area: self.area.unwrap_or(length * width),
        };
        geom.validate().map_err(|e| err("device", e.to_string()))?;
        Ok(geom)
    }

    /// Parses the compact `E=..,w=..,t=..,l=..,L0=..[,A=..][,omega_p=..]` form.
    pub fn parse_compact(spec: &str) -> Result<DeviceConfig, ConfigError> {
        let mut out = DeviceConfig::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| err("--device", format!("expected key=value, got '{part}'")))?;
            let key = match k.trim() {
                "E" => "youngs_modulus",
                "w" => "width",
                "t" => "thickness",
                "l" => "length",
                "L0" => "gap",
                "A" => "area",
                other => other,
            };
            out.set(key, v, "--device")?;
        }
        Ok(out)
    }

    fn set(&mut self, key: &str, value: &str, loc: &str) -> Result<(), ConfigError> {
        let slot = match key {
            "youngs_modulus" => &mut self.youngs_modulus,
            "width" => &mut self.width,
            "thickness" => &mut self.thickness,
            "length" => &mut self.length,
            "gap" => &mut self.gap,
            "area" => &mut self.area,
            "omega_p" => &mut self.omega_p,
            _ => return Err(err(loc, format!("unknown key 'device.{key}'"))),
        };
        *slot = Some(parse_f64(value, loc)?);
        Ok(())
    }

    fn merge(&mut self, other: &DeviceConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(youngs_modulus, width, thickness, length, gap, area, omega_p);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialSpec,
    pub quadrature: QuadratureConfig,
    pub sweep: SweepConfig,
    pub device: DeviceConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            material: MaterialSpec::default(),
            quadrature: QuadratureConfig::default(),
            sweep: SweepConfig::default(),
            device: DeviceConfig::default(),
            format: Format::Csv,
            out: None,
        }
    }
}

fn parse_f64(value: &str, loc: &str) -> Result<f64, ConfigError> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| err(loc, format!("expected a number, got '{}'", value.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(loc, format!("expected a finite number, got '{}'", value.trim())))
    }
}

pub fn parse_list(value: &str, loc: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Vec<f64> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(s, loc))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(err(loc, "expected a non-empty comma-separated list"));
    }
    Ok(items)
}

fn parse_bool(value: &str, loc: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(err(loc, format!("expected true or false, got '{other}'"))),
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets one `section.key`; `loc` names the source for error messages.
    pub fn set(&mut self, section: &str, key: &str, value: &str, loc: &str) -> Result<(), ConfigError> {
        match (section, key) {
            ("material", "model") => {
                self.material.model = value.parse::<PlateModel>().map_err(|e| err(loc, e.to_string()))?
            }
            ("material", "eps_l") => self.material.eps_l = parse_f64(value, loc)?,
            ("material", "gamma_hat") => self.material.gamma_hat = parse_f64(value, loc)?,
            ("quadrature", "rel_tol") => self.quadrature.rel_tol = parse_f64(value, loc)?,
            ("quadrature", "abs_tol") => self.quadrature.abs_tol = parse_f64(value, loc)?,
            ("quadrature", "max_depth") => {
                self.quadrature.max_depth = value
                    .trim()
                    .parse()
                    .map_err(|_| err(loc, format!("expected a non-negative integer, got '{}'", value.trim())))?
            }
            ("sweep", "fields") => self.sweep.fields = parse_list(value, loc)?,
            ("sweep", "separations") => self.sweep.separations = parse_list(value, loc)?,
            ("sweep", "l0_hat") => self.sweep.l0_hat = parse_f64(value, loc)?,
            ("sweep", "points") => {
                self.sweep.points = value
                    .trim()
                    .parse()
                    .map_err(|_| err(loc, format!("expected a non-negative integer, got '{}'", value.trim())))?
            }
            ("sweep", "z_min") => self.sweep.z_min = parse_f64(value, loc)?,
            ("sweep", "z_max") => self.sweep.z_max = parse_f64(value, loc)?,
            ("sweep", "reference") => self.sweep.reference = parse_bool(value, loc)?,
            ("sweep", "fixed_eta") => self.sweep.fixed_eta = parse_bool(value, loc)?,
            ("sweep", "baseline") => self.sweep.baseline = parse_f64(value, loc)?,
            ("device", k) => self.device.set(k, value, loc)?,
            ("output", "format") => {
                self.format = Format::parse(value)
                    .ok_or_else(|| err(loc, format!("unknown format '{}' (csv or json)", value.trim())))?
            }
            ("output", "path") => self.out = Some(PathBuf::from(value.trim())),
            ("material" | "quadrature" | "sweep" | "output", _) => {
                return Err(err(loc, format!("unknown key '{section}.{key}'")))
            }
            _ => return Err(err(loc, format!("unknown section '[{section}]'"))),
        }
        Ok(())
    }

    /// Applies a config text. JSON outputs of this tool are accepted too.
    pub fn apply_str(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        if text.trim_start().starts_with('{') {
            return self.apply_json(text, origin);
        }
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let loc = format!("{origin}:{}", idx + 1);
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(&loc, format!("malformed section header '{line}'")))?
                    .trim();
                if !matches!(name, "material" | "quadrature" | "sweep" | "device" | "output") {
                    return Err(err(&loc, format!("unknown section '[{name}]'")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(&loc, format!("expected 'key = value', got '{line}'")))?;
            let sec = section
                .as_deref()
                .ok_or_else(|| err(&loc, "key outside of any [section]"))?;
            self.set(sec, key.trim(), value, &loc)?;
        }
        Ok(())
    }

    fn apply_json(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| err(origin, format!("invalid JSON: {e}")))?;
        let meta = doc
            .get("metadata")
            .and_then(|m| m.as_object())
            .ok_or_else(|| err(origin, "JSON config needs a 'metadata' object"))?;
        for (section, entries) in meta {
            if section == "run" {
                continue;
            }
            let entries = entries
                .as_object()
                .ok_or_else(|| err(origin, format!("metadata.{section} must be an object")))?;
            for (key, value) in entries {
                let loc = format!("{origin}:metadata.{section}.{key}");
                let text = match value {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                self.set(section, key, &text, &loc)?;
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(&path.display().to_string(), format!("cannot read config: {e}")))?;
        self.apply_str(&text, &path.display().to_string())
    }

    pub fn merge_device(&mut self, other: &DeviceConfig) {
        self.device.merge(other);
    }

    /// Dimensionless gap and plasma frequency for device runs.
    pub fn device_scale(&self) -> Result<(f64, f64), ConfigError> {
        let geom = self.device.geometry()?;
        Ok(match self.device.omega_p {
            Some(wp) => (geom.gap * wp / SPEED_OF_LIGHT, wp),
            None => (self.sweep.l0_hat, self.sweep.l0_hat * SPEED_OF_LIGHT / geom.gap),
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let v = |r: voigt_casimir::Result<()>, what: &str| r.map_err(|e| err(what, e.to_string()));
        v(self.material.validate(), "material")?;
        v(self.quadrature.validate(), "quadrature")?;
        v(self.sweep.grid().validate(), "sweep")?;
        if self.sweep.l0_hat.is_nan() || self.sweep.l0_hat <= 0.0 {
            return Err(err("sweep", format!("l0_hat must be > 0, got {}", self.sweep.l0_hat)));
        }
        if let Some(bad) = self.sweep.separations.iter().find(|&&l| l.is_nan() || l <= 0.0) {
            return Err(err("sweep", format!("separations must be > 0, got {bad}")));
        }
        if let Some(bad) = self.sweep.fields.iter().find(|&&w| w.is_nan() || w < 0.0) {
            return Err(err("sweep", format!("fields must be >= 0, got {bad}")));
        }
        if !self.device.is_empty() {
            self.device.geometry()?;
            if let Some(wp) = self.device.omega_p {
                if wp.is_nan() || wp <= 0.0 {
                    return Err(err("device", format!("omega_p must be > 0, got {wp}")));
                }
            }
        }
        Ok(())
    }

    /// Resolved configuration as ordered `(section, [(key, value)])` pairs.
    pub fn sections(&self) -> Vec<(&'static str, Vec<(&'static str, String)>)> {
        let m = &self.material;
        let q = &self.quadrature;
        let s = &self.sweep;
        let mut out = vec![
            (
                "material",
                vec![
                    ("model", m.model.name().to_string()),
                    ("eps_l", m.eps_l.to_string()),
                    ("gamma_hat", m.gamma_hat.to_string()),
                ],
            ),
            (
                "quadrature",
                vec![
                    ("rel_tol", q.rel_tol.to_string()),
                    ("abs_tol", q.abs_tol.to_string()),
                    ("max_depth", q.max_depth.to_string()),
                ],
            ),
            (
                "sweep",
                vec![
                    ("fields", join(&s.fields)),
                    ("separations", join(&s.separations)),
                    ("l0_hat", s.l0_hat.to_string()),
                    ("points", s.points.to_string()),
                    ("z_min", s.z_min.to_string()),
                    ("z_max", s.z_max.to_string()),
                    ("reference", s.reference.to_string()),
                    ("fixed_eta", s.fixed_eta.to_string()),
                    ("baseline", s.baseline.to_string()),
                ],
            ),
        ];
        if !self.device.is_empty() {
            let d = &self.device;
            let entries = [
                ("youngs_modulus", d.youngs_modulus),
                ("width", d.width),
                ("thickness", d.thickness),
                ("length", d.length),
                ("gap", d.gap),
                ("area", d.area),
                ("omega_p", d.omega_p),
            ]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v.to_string())))
            .collect();
            out.push(("device", entries));
        }
        out.push(("output", vec![("format", self.format.name().to_string())]));
        out
    }
}
