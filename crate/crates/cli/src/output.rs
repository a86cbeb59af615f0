//! Output records and their JSON / CSV renderings.

use std::collections::BTreeMap;

use dce_core::quantities::{CheckStatus, ValidityCheck, ValidityReport};
use serde::Serialize;

use crate::config::{Amplitude, Duration, Format, GeometryKind, Params};
use crate::CliError;

/// Echo of the resolved inputs in SI units.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_m: Option<f64>,
    #[serde(rename = "L_m", skip_serializing_if = "Option::is_none")]
    pub length_m: Option<f64>,
    #[serde(rename = "A_m2", skip_serializing_if = "Option::is_none")]
    pub area_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0_rad_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0_m_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w0dt: Option<f64>,
}

impl Inputs {
    pub fn from_params(p: &Params) -> Self {
        let mut inputs = Inputs {
            a_m: p.a,
            b_m: p.b,
            length_m: p.length,
            area_m2: p.area,
            omega0_rad_s: p.omega0,
            ..Inputs::default()
        };
        match p.amplitude {
            Some(Amplitude::Displacement(d)) => inputs.amplitude_m = Some(d),
            Some(Amplitude::PeakSpeed(v)) => {
                inputs.v0_m_s = Some(v);
                inputs.amplitude_m = p.omega0.map(|w| v / w);
            }
            None => {}
        }
        match p.duration {
            Some(Duration::Seconds(t)) => {
                inputs.dt_s = Some(t);
                inputs.w0dt = p.omega0.map(|w| w * t);
            }
            Some(Duration::DriveCycles(x)) => {
                inputs.w0dt = Some(x);
                inputs.dt_s = p.omega0.map(|w| x / w);
            }
            None => {}
        }
        inputs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validity {
    pub status: CheckStatus,
    pub checks: Vec<ValidityCheck>,
}

impl From<&ValidityReport> for Validity {
    fn from(r: &ValidityReport) -> Self {
        Validity {
            status: r.status(),
            checks: r.checks.clone(),
        }
    }
}

impl Validity {
    pub fn failed() -> Self {
        Validity {
            status: CheckStatus::Fail,
            checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub formula_tag: String,
    pub version: &'static str,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub truncation: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn new(formula_tag: &str) -> Self {
        Provenance {
            formula_tag: formula_tag.to_string(),
            version: dce_core::VERSION,
            truncation: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.truncation.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub operation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryKind>,
    pub inputs: Inputs,
    pub results: serde_json::Value,
    pub validity: Validity,
    pub provenance: Provenance,
}

/// Fixed-header table for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// CSV cell for a float: 17 significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn status_str(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Warn => "warn",
        CheckStatus::Fail => "fail",
    }
}

pub fn render(records: &[OutputRecord], table: &Table, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)
                .map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            let out = |e: csv::Error| CliError::Output(e.to_string());
            w.write_record(&table.header).map_err(out)?;
            for row in &table.rows {
                w.write_record(row).map_err(out)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
        }
    }
}
