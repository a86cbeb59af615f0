//! Dimensional input parsing with mandatory unit suffixes.
//!
//! Frequencies in Hz-family units are cyclic and are converted to angular
//! frequency (`x 2 pi`); `rad/s` is taken as is. Speeds may be written
//! relative to the speed of light, e.g. `1e-7c`.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Area,
    AngularFrequency,
    Speed,
    Time,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Length => "length",
            Dimension::Area => "area",
            Dimension::AngularFrequency => "frequency",
            Dimension::Speed => "speed",
            Dimension::Time => "time",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("`{input}`: {dim} needs a unit suffix (one of {allowed})")]
    MissingUnit {
        input: String,
        dim: Dimension,
        allowed: String,
    },
    #[error("`{input}`: `{number}` is not a finite number")]
    BadNumber { input: String, number: String },
}

const LENGTH: &[(&str, f64)] = &[
    ("m", 1.0),
    ("cm", 1e-2),
    ("mm", 1e-3),
    ("um", 1e-6),
    ("µm", 1e-6),
    ("nm", 1e-9),
    ("pm", 1e-12),
];

const AREA: &[(&str, f64)] = &[
    ("m2", 1.0),
    ("cm2", 1e-4),
    ("mm2", 1e-6),
    ("um2", 1e-12),
    ("µm2", 1e-12),
];

const FREQUENCY: &[(&str, f64)] = &[
    ("rad/s", 1.0),
    ("Hz", 2.0 * PI),
    ("kHz", 2.0 * PI * 1e3),
    ("MHz", 2.0 * PI * 1e6),
    ("GHz", 2.0 * PI * 1e9),
    ("THz", 2.0 * PI * 1e12),
];

const SPEED: &[(&str, f64)] = &[("m/s", 1.0), ("c", SPEED_OF_LIGHT)];

const TIME: &[(&str, f64)] = &[
    ("s", 1.0),
    ("ms", 1e-3),
    ("us", 1e-6),
    ("µs", 1e-6),
    ("ns", 1e-9),
    ("ps", 1e-12),
    ("fs", 1e-15),
];

/// Exact SI value used for `c`-relative speeds.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

fn table(dim: Dimension) -> &'static [(&'static str, f64)] {
    match dim {
        Dimension::Length => LENGTH,
        Dimension::Area => AREA,
        Dimension::AngularFrequency => FREQUENCY,
        Dimension::Speed => SPEED,
        Dimension::Time => TIME,
    }
}

/// SI unit used when echoing values back as strings.
pub fn si_suffix(dim: Dimension) -> &'static str {
    match dim {
        Dimension::Length => "m",
        Dimension::Area => "m2",
        Dimension::AngularFrequency => "rad/s",
        Dimension::Speed => "m/s",
        Dimension::Time => "s",
    }
}

/// Parse `input` as a quantity of dimension `dim`, returning its SI value.
pub fn parse(dim: Dimension, input: &str) -> Result<f64, UnitError> {
    let s = input.trim();
    let mut units: Vec<&(&str, f64)> = table(dim).iter().collect();
    units.sort_by_key(|(suffix, _)| std::cmp::Reverse(suffix.len()));
    let (number, scale) = units
        .into_iter()
        .find_map(|(suffix, scale)| s.strip_suffix(suffix).map(|rest| (rest.trim_end(), *scale)))
        .ok_or_else(|| UnitError::MissingUnit {
            input: input.to_string(),
            dim,
            allowed: table(dim)
                .iter()
                .map(|(u, _)| *u)
                .collect::<Vec<_>>()
                .join(", "),
        })?;
    let bad = || UnitError::BadNumber {
        input: input.to_string(),
        number: number.to_string(),
    };
    let value: f64 = number.parse().map_err(|_| bad())?;
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value * scale)
}

/// Lossless string form of an SI value, e.g. `3e-2m`.
pub fn format_si(dim: Dimension, value: f64) -> String {
    format!("{value:e}{}", si_suffix(dim))
}
