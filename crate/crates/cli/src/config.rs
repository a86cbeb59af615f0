//! Run configuration: the JSON file shape, command-line overlay and
//! resolution of unit strings into SI values.

use std::path::Path;

use clap::ValueEnum;
use dce_core::{CoaxGeometry, Drive, PlateGeometry};
use serde::{Deserialize, Serialize};

use crate::units::{self, format_si, Dimension};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Rate,
    Cutoff,
    Spectrum,
    Sweep,
    Validate,
}

impl Operation {
    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Rate => "rate",
            Operation::Cutoff => "cutoff",
            Operation::Spectrum => "spectrum",
            Operation::Sweep => "sweep",
            Operation::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    Coax,
    Plates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Closed form used for the coax rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    #[default]
    General,
    SmallGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    #[default]
    Modes,
    Uniform,
}

/// Everything a run can be told, either from a JSON file or from flags.
/// Dimensional values are unit strings such as `"1um"` or `"10GHz"`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operation: Option<Operation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<String>,
    #[serde(default, rename = "A", skip_serializing_if = "Option::is_none")]
    pub area: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drho0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dz0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<String>,
    /// Drive duration in units of `1/omega0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_f0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// `name:min:max:count:lin|log`, e.g. `f0:1GHz:10GHz:11:log`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("reading config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `top` wins field by field. The amplitude (`drho0`, `dz0`, `v0`) and
    /// the duration (`dt`, `w0dt`) are each replaced as a group, so a flag
    /// never combines with a conflicting file value.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let amp_from_top = top.drho0.is_some() || top.dz0.is_some() || top.v0.is_some();
        let dur_from_top = top.dt.is_some() || top.w0dt.is_some();
        let (drho0, dz0, v0) = if amp_from_top {
            (top.drho0, top.dz0, top.v0)
        } else {
            (self.drho0, self.dz0, self.v0)
        };
        let (dt, w0dt) = if dur_from_top {
            (top.dt, top.w0dt)
        } else {
            (self.dt, self.w0dt)
        };
        RunConfig {
            operation: top.operation.or(self.operation),
            geometry: top.geometry.or(self.geometry),
            format: top.format.or(self.format),
            formula: top.formula.or(self.formula),
            a: top.a.or(self.a),
            b: top.b.or(self.b),
            length: top.length.or(self.length),
            area: top.area.or(self.area),
            f0: top.f0.or(self.f0),
            drho0,
            dz0,
            v0,
            dt,
            w0dt,
            check_f0: top.check_f0.or(self.check_f0),
            m_max: top.m_max.or(self.m_max),
            p_max: top.p_max.or(self.p_max),
            grid: top.grid.or(self.grid),
            omega_max_factor: top.omega_max_factor.or(self.omega_max_factor),
            omega_min: top.omega_min.or(self.omega_min),
            omega_max: top.omega_max.or(self.omega_max),
            points: top.points.or(self.points),
            axes: if top.axes.is_empty() { self.axes } else { top.axes },
        }
    }

    /// SI values of every dimensional field that is present.
    pub fn params(&self) -> Result<Params, CliError> {
        let get = |dim, v: &Option<String>| v.as_deref().map(|s| units::parse(dim, s)).transpose();
        let amplitude = match (&self.drho0, &self.dz0, &self.v0) {
            (None, None, None) => None,
            (Some(s), None, None) | (None, Some(s), None) => {
                Some(Amplitude::Displacement(units::parse(Dimension::Length, s)?))
            }
            (None, None, Some(s)) => Some(Amplitude::PeakSpeed(units::parse(Dimension::Speed, s)?)),
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --drho0, --dz0 or --v0".into(),
                ))
            }
        };
        let duration = match (&self.dt, self.w0dt) {
            (None, None) => None,
            (Some(s), None) => Some(Duration::Seconds(units::parse(Dimension::Time, s)?)),
            (None, Some(x)) => Some(Duration::DriveCycles(x)),
            _ => return Err(CliError::Usage("give only one of --dt or --w0dt".into())),
        };
        Ok(Params {
            a: get(Dimension::Length, &self.a)?,
            b: get(Dimension::Length, &self.b)?,
            length: get(Dimension::Length, &self.length)?,
            area: get(Dimension::Area, &self.area)?,
            omega0: get(Dimension::AngularFrequency, &self.f0)?,
            amplitude,
            duration,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitude {
    Displacement(f64),
    PeakSpeed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Duration {
    Seconds(f64),
    /// `omega0 * dt`.
    DriveCycles(f64),
}

/// Resolved SI parameters; fields a command does not need may be absent.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Params {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub length: Option<f64>,
    pub area: Option<f64>,
    pub omega0: Option<f64>,
    pub amplitude: Option<Amplitude>,
    pub duration: Option<Duration>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

/// Parameter names a sweep axis may refer to.
pub const AXIS_NAMES: &[&str] = &["a", "b", "L", "A", "f0", "drho0", "dz0", "v0", "dt", "w0dt"];

pub fn axis_dimension(name: &str) -> Option<Option<Dimension>> {
    Some(match name {
        "a" | "b" | "L" | "drho0" | "dz0" => Some(Dimension::Length),
        "A" => Some(Dimension::Area),
        "f0" => Some(Dimension::AngularFrequency),
        "v0" => Some(Dimension::Speed),
        "dt" => Some(Dimension::Time),
        "w0dt" => None,
        _ => return None,
    })
}

impl Params {
    pub fn coax(&self) -> Result<CoaxGeometry, CliError> {
        Ok(CoaxGeometry::new(
            need(self.b, "b")?,
            need(self.a, "a")?,
            need(self.length, "L")?,
        )?)
    }

    pub fn coax_cross_section(&self) -> Result<CoaxGeometry, CliError> {
        // the cutoff table does not depend on L
        Ok(CoaxGeometry::new(
            need(self.b, "b")?,
            need(self.a, "a")?,
            self.length.unwrap_or(1.0),
        )?)
    }

    pub fn plates(&self) -> Result<PlateGeometry, CliError> {
        Ok(PlateGeometry::new(need(self.area, "A")?, need(self.a, "a")?)?)
    }

    pub fn drive(&self, amplitude_flag: &str) -> Result<Drive, CliError> {
        let omega0 = need(self.omega0, "f0")?;
        match self.amplitude {
            Some(Amplitude::Displacement(d)) => Ok(Drive::new(omega0, d)?),
            Some(Amplitude::PeakSpeed(v)) => Ok(Drive::from_peak_speed(omega0, v)?),
            None => Err(CliError::Usage(format!("missing --{amplitude_flag} or --v0"))),
        }
    }

    pub fn dt(&self, omega0: f64) -> Result<f64, CliError> {
        match self.duration {
            Some(Duration::Seconds(t)) => Ok(t),
            Some(Duration::DriveCycles(x)) => Ok(x / omega0),
            None => Err(CliError::Usage("missing --dt or --w0dt".into())),
        }
    }

    /// Overwrite the parameter called `name` with the SI value `value`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        match name {
            "a" => self.a = Some(value),
            "b" => self.b = Some(value),
            "L" => self.length = Some(value),
            "A" => self.area = Some(value),
            "f0" => self.omega0 = Some(value),
            "drho0" | "dz0" => self.amplitude = Some(Amplitude::Displacement(value)),
            "v0" => self.amplitude = Some(Amplitude::PeakSpeed(value)),
            "dt" => self.duration = Some(Duration::Seconds(value)),
            "w0dt" => self.duration = Some(Duration::DriveCycles(value)),
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown parameter `{name}` (expected one of {})",
                    AXIS_NAMES.join(", ")
                )))
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl SweepAxis {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("sweep axis `{spec}`: {why}"));
        let parts: Vec<&str> = spec.split(':').collect();
        let [name, min, max, count, scale] = parts[..] else {
            return Err(bad("expected name:min:max:count:lin|log"));
        };
        let dim = axis_dimension(name)
            .ok_or_else(|| bad(&format!("unknown parameter (one of {})", AXIS_NAMES.join(", "))))?;
        let value = |s: &str| -> Result<f64, CliError> {
            match dim {
                Some(d) => Ok(units::parse(d, s)?),
                None => s.trim().parse().map_err(|_| bad(&format!("`{s}` is not a number"))),
            }
        };
        let (min, max) = (value(min)?, value(max)?);
        let count: usize = count.trim().parse().map_err(|_| bad("count must be an integer"))?;
        if count < 2 {
            return Err(bad("count must be at least 2"));
        }
        let scale = match scale.trim() {
            "lin" => AxisScale::Lin,
            "log" => AxisScale::Log,
            _ => return Err(bad("scale must be lin or log")),
        };
        if scale == AxisScale::Log && !(min > 0.0 && max > 0.0) {
            return Err(bad("log axes need positive bounds"));
        }
        Ok(SweepAxis {
            name: name.to_string(),
            min,
            max,
            count,
            scale,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    AxisScale::Lin => self.min + t * (self.max - self.min),
                    AxisScale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Unit strings for echoed SI inputs; parsing them reproduces the values.
pub fn echo_config(p: &Params) -> RunConfig {
    let len = |v: Option<f64>| v.map(|x| format_si(Dimension::Length, x));
    let mut cfg = RunConfig {
        a: len(p.a),
        b: len(p.b),
        length: len(p.length),
        area: p.area.map(|x| format_si(Dimension::Area, x)),
        f0: p.omega0.map(|x| format_si(Dimension::AngularFrequency, x)),
        ..RunConfig::default()
    };
    match p.amplitude {
        Some(Amplitude::Displacement(d)) => cfg.drho0 = len(Some(d)),
        Some(Amplitude::PeakSpeed(v)) => cfg.v0 = Some(format_si(Dimension::Speed, v)),
        None => {}
    }
    match p.duration {
        Some(Duration::Seconds(t)) => cfg.dt = Some(format_si(Dimension::Time, t)),
        Some(Duration::DriveCycles(x)) => cfg.w0dt = Some(x),
        None => {}
    }
    cfg
}
