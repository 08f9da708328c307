//! Run configuration: built-in defaults, then a `key = value` file, then
//! `--set` overrides.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use qcav_core::physical::{CavityGeometry, DeskScale, DeviceSpec};

use crate::error::CliError;
use crate::units::{parse_angle, parse_bool, parse_count, parse_list, parse_quantity, Dimension};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Params,
    Storage,
    Decoherence,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// The physical device in SI units.
    Device,
    /// Dimensionless ω = 1 sets with visible dynamics.
    Desk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericModel {
    Exact,
    Quadratic,
}

/// Time grid; unset fields fall back to per-command defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GridSpec {
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub n_points: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub scale: Scale,
    pub mirror_radius: f64,
    pub length: f64,
    pub frequency: f64,
    pub e_c_ev: f64,
    pub e_j_ev: f64,
    pub loop_area: f64,
    pub phi_e: f64,
    pub cutoff: Option<usize>,
    pub grid: GridSpec,
    pub alphas: Vec<f64>,
    pub numeric: bool,
    pub model: NumericModel,
    pub sweep_phi_e: Option<Vec<f64>>,
    pub sweep_alpha: Option<Vec<f64>>,
    pub eta_max: Option<f64>,
    pub delta_max: Option<f64>,
    pub phi0: Option<f64>,
}

/// Where a setting came from, for error messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    File { path: String, line: usize },
    Override,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Override => write!(f, "--set"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Setting {
    pub key: String,
    pub value: String,
    pub origin: Origin,
}

/// Settings from a config file, in file order.
pub fn parse_config_text(text: &str, path: &str) -> Result<Vec<Setting>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let origin = Origin::File {
            path: path.to_string(),
            line: idx + 1,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{origin}: expected 'key = value', got '{line}'")))?;
        out.push(Setting {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            origin,
        });
    }
    Ok(out)
}

/// One `--set key=value` argument.
pub fn parse_override(arg: &str) -> Result<Setting, CliError> {
    let (key, value) = arg
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got '{arg}'")))?;
    Ok(Setting {
        key: key.trim().to_string(),
        value: value.trim().to_string(),
        origin: Origin::Override,
    })
}

/// Canonical key for a name or alias.
fn canonical(key: &str) -> Option<&'static str> {
    Some(match key {
        "scale" => "scale",
        "R" | "mirror_radius" => "mirror_radius",
        "L" | "length" => "length",
        "f" | "frequency" => "frequency",
        "E_C" | "e_c" => "e_c",
        "E_J" | "e_j" => "e_j",
        "S" | "loop_area" => "loop_area",
        "phi_e" => "phi_e",
        "cutoff" => "cutoff",
        "t_start" => "t_start",
        "t_end" => "t_end",
        "n_points" => "n_points",
        "alphas" | "alpha" => "alphas",
        "numeric" => "numeric",
        "model" => "model",
        "sweep_phi_e" => "sweep_phi_e",
        "sweep_alpha" => "sweep_alpha",
        "eta_max" => "eta_max",
        "delta_max" => "delta_max",
        "phi0" => "phi0",
        _ => return None,
    })
}

const DESK_ONLY: [&str; 3] = ["eta_max", "delta_max", "phi0"];

impl RunConfig {
    pub fn defaults(mode: Mode) -> Self {
        let device = DeviceSpec::reference();
        RunConfig {
            mode,
            scale: Scale::Device,
            mirror_radius: device.geometry.mirror_radius,
            length: device.geometry.length,
            frequency: device.frequency_hz,
            e_c_ev: device.e_c_ev,
            e_j_ev: device.e_j_ev,
            loop_area: device.loop_area,
            phi_e: FRAC_PI_2,
            cutoff: None,
            grid: GridSpec::default(),
            alphas: vec![0.0, 1.0, 2.0, 3.0],
            numeric: true,
            model: NumericModel::Exact,
            sweep_phi_e: None,
            sweep_alpha: None,
            eta_max: None,
            delta_max: None,
            phi0: None,
        }
    }

    /// Defaults with `settings` applied in order; later settings win.
    pub fn resolve(mode: Mode, settings: &[Setting]) -> Result<Self, CliError> {
        let mut cfg = RunConfig::defaults(mode);
        for s in settings {
            cfg.apply(s)
                .map_err(|msg| CliError::Config(format!("{}: {}: {msg}", s.origin, s.key)))?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn apply(&mut self, s: &Setting) -> Result<(), String> {
        let key = canonical(&s.key).ok_or_else(|| "unknown key".to_string())?;
        let v = s.value.as_str();
        let number = |dim| parse_quantity(v, dim);
        let reals = || parse_list(v, |x| parse_quantity(x, Dimension::Plain));
        match key {
            "scale" => {
                self.scale = match v {
                    "device" => Scale::Device,
                    "desk" => Scale::Desk,
                    other => return Err(format!("expected device or desk, got '{other}'")),
                }
            }
            "mirror_radius" => self.mirror_radius = number(Dimension::Length)?,
            "length" => self.length = number(Dimension::Length)?,
            "frequency" => self.frequency = number(Dimension::Frequency)?,
            "e_c" => self.e_c_ev = number(Dimension::Energy)?,
            "e_j" => self.e_j_ev = number(Dimension::Energy)?,
            "loop_area" => self.loop_area = number(Dimension::Area)?,
            "phi_e" => self.phi_e = parse_angle(v)?,
            "cutoff" => self.cutoff = Some(parse_count(v)?),
            "t_start" => self.grid.t_start = Some(number(Dimension::Time)?),
            "t_end" => self.grid.t_end = Some(number(Dimension::Time)?),
            "n_points" => self.grid.n_points = Some(parse_count(v)?),
            "alphas" => self.alphas = reals()?,
            "numeric" => self.numeric = parse_bool(v)?,
            "model" => {
                self.model = match v {
                    "exact" => NumericModel::Exact,
                    "quadratic" => NumericModel::Quadratic,
                    other => return Err(format!("expected exact or quadratic, got '{other}'")),
                }
            }
            "sweep_phi_e" => self.sweep_phi_e = Some(parse_list(v, parse_angle)?),
            "sweep_alpha" => self.sweep_alpha = Some(reals()?),
            "eta_max" => self.eta_max = Some(number(Dimension::Plain)?),
            "delta_max" => self.delta_max = Some(number(Dimension::Plain)?),
            "phi0" => self.phi0 = Some(number(Dimension::Plain)?),
            _ => unreachable!("canonical keys are matched above"),
        }
        Ok(())
    }

    fn check(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.scale == Scale::Device {
            let set: Vec<&str> = DESK_ONLY
                .iter()
                .zip([self.eta_max, self.delta_max, self.phi0])
                .filter(|(_, v)| v.is_some())
                .map(|(k, _)| *k)
                .collect();
            if !set.is_empty() {
                return fail(format!("{} only apply with scale = desk", set.join(", ")));
            }
        }
        if let Some(n) = self.grid.n_points {
            if n < 2 {
                return fail(format!("n_points must be at least 2, got {n}"));
            }
        }
        if let (Some(a), Some(b)) = (self.grid.t_start, self.grid.t_end) {
            if !(b > a) {
                return fail(format!("t_end ({b}) must exceed t_start ({a})"));
            }
        }
        if self.cutoff == Some(0) {
            return fail("cutoff must be at least 1".into());
        }
        if self.mode == Mode::Decoherence && self.alphas.is_empty() {
            return fail("alphas is empty".into());
        }
        if self.mode == Mode::Sweep {
            if self.sweep_phi_e.as_ref().is_some_and(Vec::is_empty) {
                return fail("sweep_phi_e is empty".into());
            }
            if self.sweep_alpha.as_ref().is_some_and(Vec::is_empty) {
                return fail("sweep_alpha is empty".into());
            }
            if self.sweep_alpha.is_none() && self.alphas.is_empty() {
                return fail("alphas is empty".into());
            }
        }
        Ok(())
    }

    /// The device in SI units at flux bias `phi_e`.
    pub fn device(&self, phi_e: f64) -> Result<DeviceSpec, CliError> {
        let geometry = CavityGeometry::for_frequency(self.mirror_radius, self.length, self.frequency)?;
        Ok(DeviceSpec {
            geometry,
            frequency_hz: self.frequency,
            e_c_ev: self.e_c_ev,
            e_j_ev: self.e_j_ev,
            loop_area: self.loop_area,
            phi_e,
        })
    }

    /// Desk-scale coupling family, with any overrides applied to `base`.
    pub fn desk_scale(&self, base: DeskScale) -> DeskScale {
        DeskScale {
            eta_max: self.eta_max.unwrap_or(base.eta_max),
            delta_max: self.delta_max.unwrap_or(base.delta_max),
            phi0: self.phi0.unwrap_or(base.phi0),
        }
    }
}
