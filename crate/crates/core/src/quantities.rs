//! Physical constants, SI parameter types and regime-validity checks.
//!
//! Every length is in metres, every angular frequency in rad/s and every
//! speed in m/s. Constructors reject nonpositive or non-finite inputs, and
//! the types are immutable afterwards.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};

/// Fundamental constants used by the field normalization and the rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    c: f64,
    hbar: f64,
    eps0: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values. The speed of light is exact.
    pub const CODATA2018: PhysicalConstants = PhysicalConstants {
        c: 299_792_458.0,
        hbar: 1.054_571_817e-34,
        eps0: 8.854_187_812_8e-12,
    };

    /// Custom constant set, mostly useful for dimensional audits.
    pub fn new(c: f64, hbar: f64, eps0: f64) -> Result<Self> {
        Ok(Self {
            c: ensure_positive("c", c)?,
            hbar: ensure_positive("hbar", hbar)?,
            eps0: ensure_positive("eps0", eps0)?,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA2018
    }
}

/// Static geometry of the coaxial guide: inner radius `b`, annular gap `a`
/// and axial (periodization) length `L`. The outer radius is `b + a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoaxGeometry {
    inner_radius: f64,
    gap: f64,
    length: f64,
}

impl CoaxGeometry {
    pub fn new(inner_radius: f64, gap: f64, length: f64) -> Result<Self> {
        Ok(Self {
            inner_radius: ensure_positive("b", inner_radius)?,
            gap: ensure_positive("a", gap)?,
            length: ensure_positive("L", length)?,
        })
    }

    /// Inner radius `b` (m).
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    /// Annular gap `a` (m).
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Axial length `L` (m).
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Static outer radius `b + a` (m).
    pub fn outer_radius(&self) -> f64 {
        self.inner_radius + self.gap
    }

    /// `log(1 + a/b)`, the logarithmic capacitance factor of the annulus.
    pub fn log_ratio(&self) -> f64 {
        (self.gap / self.inner_radius).ln_1p()
    }

    pub fn with_radii_scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.inner_radius * s, self.gap * s, self.length)
    }
}

/// Reference geometry: two parallel plates of area `A` separated by `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateGeometry {
    area: f64,
    separation: f64,
}

impl PlateGeometry {
    pub fn new(area: f64, separation: f64) -> Result<Self> {
        Ok(Self {
            area: ensure_positive("A", area)?,
            separation: ensure_positive("a", separation)?,
        })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }
}

/// Harmonic wall motion `amplitude * cos(omega0 * t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    omega0: f64,
    amplitude: f64,
}

impl Drive {
    pub fn new(omega0: f64, amplitude: f64) -> Result<Self> {
        Ok(Self {
            omega0: ensure_positive("omega0", omega0)?,
            amplitude: ensure_nonnegative("amplitude", amplitude)?,
        })
    }

    /// Drive with the amplitude fixed by a peak wall speed `v0 = omega0 * amplitude`.
    pub fn from_peak_speed(omega0: f64, v0: f64) -> Result<Self> {
        let omega0 = ensure_positive("omega0", omega0)?;
        let v0 = ensure_nonnegative("v0", v0)?;
        Self::new(omega0, v0 / omega0)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn with_omega0(&self, omega0: f64) -> Result<Self> {
        Self::new(omega0, self.amplitude)
    }
}

/// Peak wall speed `omega0 * amplitude` (m/s).
pub fn peak_speed(drive: &Drive) -> f64 {
    drive.omega0 * drive.amplitude
}

/// Amplitude-to-gap ratio above which first-order theory is flagged.
pub const PERTURBATIVE_WARN: f64 = 0.01;
/// Amplitude-to-gap ratio above which first-order theory is rejected.
pub const PERTURBATIVE_MAX: f64 = 0.1;
/// Largest accepted `v0 / c`.
pub const NONRELATIVISTIC_MAX: f64 = 1e-3;
/// `L * omega0 / (2 pi c)` at or above which end diffraction is considered negligible.
pub const LONG_GUIDE_MIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

/// One named regime check with its dimensionless ratio and threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityCheck {
    pub name: String,
    pub ratio: f64,
    pub threshold: f64,
    pub status: CheckStatus,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidityReport {
    pub checks: Vec<ValidityCheck>,
}

impl ValidityReport {
    /// Worst status over all checks; `Pass` for an empty report.
    pub fn status(&self) -> CheckStatus {
        self.checks
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(CheckStatus::Pass)
    }

    /// True when no check failed. Warnings are caveats, not failures.
    pub fn is_valid(&self) -> bool {
        self.status() != CheckStatus::Fail
    }

    pub fn check(&self, name: &str) -> Option<&ValidityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn push(&mut self, check: ValidityCheck) {
        self.checks.push(check);
    }
}

pub const CHECK_TEM_ONLY: &str = "tem_only";
pub const CHECK_PERTURBATIVE: &str = "perturbative";
pub const CHECK_NONRELATIVISTIC: &str = "nonrelativistic";
pub const CHECK_LONG_GUIDE: &str = "long_guide";
pub const CHECK_SHORT_DISTANCE: &str = "short_distance";
pub const CHECK_SMALL_GAP: &str = "small_gap";

fn below(name: &str, ratio: f64, threshold: f64, note: &str) -> ValidityCheck {
    ValidityCheck {
        name: name.to_string(),
        ratio,
        threshold,
        status: if ratio < threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        note: note.to_string(),
    }
}

fn perturbative_check(amplitude: f64, gap: f64) -> ValidityCheck {
    let ratio = amplitude / gap;
    let status = if ratio <= PERTURBATIVE_WARN {
        CheckStatus::Pass
    } else if ratio <= PERTURBATIVE_MAX {
        CheckStatus::Warn
    } else {
        CheckStatus::Fail
    };
    ValidityCheck {
        name: CHECK_PERTURBATIVE.to_string(),
        ratio,
        threshold: PERTURBATIVE_MAX,
        status,
        note: format!("amplitude/gap; warns above {PERTURBATIVE_WARN}"),
    }
}

fn nonrelativistic_check(drive: &Drive, consts: &PhysicalConstants) -> ValidityCheck {
    let ratio = peak_speed(drive) / consts.c();
    ValidityCheck {
        name: CHECK_NONRELATIVISTIC.to_string(),
        ratio,
        threshold: NONRELATIVISTIC_MAX,
        status: if ratio <= NONRELATIVISTIC_MAX {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        note: "v0/c".to_string(),
    }
}

/// Regime checks for the coaxial guide.
///
/// `cutoff` is the lowest non-TEM cutoff angular frequency, normally
/// [`crate::specfun::CutoffTable::min_cutoff`]. The report always carries
/// `tem_only` (omega0/cutoff), `perturbative` (amplitude/a),
/// `nonrelativistic` (v0/c) and `long_guide` (L omega0 / 2 pi c, a caveat
/// only).
pub fn validate_regime(
    drive: &Drive,
    geom: &CoaxGeometry,
    cutoff: f64,
    consts: &PhysicalConstants,
) -> Result<ValidityReport> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            value: cutoff,
            reason: "cutoff frequency must be finite and strictly positive",
        });
    }
    let mut report = ValidityReport::default();
    report.push(below(
        CHECK_TEM_ONLY,
        drive.omega0() / cutoff,
        1.0,
        "omega0 / lowest TE/TM cutoff",
    ));
    report.push(perturbative_check(drive.amplitude(), geom.gap()));
    report.push(nonrelativistic_check(drive, consts));

    let long = geom.length() * drive.omega0() / (2.0 * PI * consts.c());
    report.push(ValidityCheck {
        name: CHECK_LONG_GUIDE.to_string(),
        ratio: long,
        threshold: LONG_GUIDE_MIN,
        status: if long >= LONG_GUIDE_MIN {
            CheckStatus::Pass
        } else {
            CheckStatus::Warn
        },
        note: "L*omega0/(2*pi*c); end diffraction neglected, result is an order-of-magnitude estimate when not >> 1"
            .to_string(),
    });
    Ok(report)
}

/// Regime checks for the parallel-plate reference configuration.
pub fn validate_plates(
    drive: &Drive,
    geom: &PlateGeometry,
    consts: &PhysicalConstants,
) -> ValidityReport {
    let mut report = ValidityReport::default();
    report.push(below(
        CHECK_SHORT_DISTANCE,
        drive.omega0() * geom.separation() / (PI * consts.c()),
        1.0,
        "omega0*a/(pi*c); only l = 0 TM modes are excited below 1",
    ));
    report.push(perturbative_check(drive.amplitude(), geom.separation()));
    report.push(nonrelativistic_check(drive, consts));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: f64 = 299_792_458.0;

    fn paper_drive() -> Drive {
        Drive::from_peak_speed(2.0 * PI * 1e10, 1e-7 * C).unwrap()
    }

    #[test]
    fn peak_speed_matches_quoted_drive() {
        let v = peak_speed(&paper_drive());
        assert!((v - 29.979_245_8).abs() < 1e-9);
        assert_eq!(peak_speed(&Drive::new(1.0, 1.0).unwrap()), 1.0);
        assert_eq!(peak_speed(&Drive::new(3.7e9, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(CoaxGeometry::new(0.0, 1e-6, 1.0).is_err());
        assert!(CoaxGeometry::new(1e-2, -1e-6, 1.0).is_err());
        assert!(CoaxGeometry::new(1e-2, 1e-6, f64::NAN).is_err());
        assert!(PlateGeometry::new(1.0, 0.0).is_err());
        assert!(Drive::new(0.0, 1e-9).is_err());
        assert!(Drive::new(1.0, -1e-9).is_err());
        assert!(Drive::new(1.0, 0.0).is_ok());
        assert!(PhysicalConstants::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn outer_radius_is_static_sum() {
        let g = CoaxGeometry::new(1e-2, 1e-6, 0.03).unwrap();
        assert_eq!(g.outer_radius(), 1e-2 + 1e-6);
    }

    #[test]
    fn canonical_parameters_pass() {
        let consts = PhysicalConstants::CODATA2018;
        let geom = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
        let drive = paper_drive();
        // any cutoff comfortably above omega0
        let report = validate_regime(&drive, &geom, 3e11, &consts).unwrap();
        for name in [CHECK_TEM_ONLY, CHECK_PERTURBATIVE, CHECK_NONRELATIVISTIC] {
            assert_eq!(report.check(name).unwrap().status, CheckStatus::Pass, "{name}");
        }
        let nr = report.check(CHECK_NONRELATIVISTIC).unwrap();
        assert!((nr.ratio - 1e-7).abs() < 1e-20);
        // L ~ one wavelength: caveat only
        assert_eq!(report.check(CHECK_LONG_GUIDE).unwrap().status, CheckStatus::Warn);
        assert!(report.is_valid());
    }

    #[test]
    fn zero_amplitude_is_perturbative() {
        let consts = PhysicalConstants::CODATA2018;
        let geom = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
        let drive = Drive::new(1e9, 0.0).unwrap();
        let report = validate_regime(&drive, &geom, 1e12, &consts).unwrap();
        let p = report.check(CHECK_PERTURBATIVE).unwrap();
        assert_eq!(p.ratio, 0.0);
        assert_eq!(p.status, CheckStatus::Pass);
    }

    #[test]
    fn above_cutoff_fails_tem_check() {
        let consts = PhysicalConstants::CODATA2018;
        let geom = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
        let drive = Drive::new(1.5e10, 1e-12).unwrap();
        let report = validate_regime(&drive, &geom, 1e10, &consts).unwrap();
        let tem = report.check(CHECK_TEM_ONLY).unwrap();
        assert!((tem.ratio - 1.5).abs() < 1e-15);
        assert_eq!(tem.status, CheckStatus::Fail);
        assert!(!report.is_valid());
    }

    #[test]
    fn perturbative_bands() {
        let consts = PhysicalConstants::CODATA2018;
        let geom = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
        let status = |amp: f64| {
            let d = Drive::new(1e3, amp).unwrap();
            validate_regime(&d, &geom, 1e12, &consts)
                .unwrap()
                .check(CHECK_PERTURBATIVE)
                .unwrap()
                .status
        };
        assert_eq!(status(5e-9), CheckStatus::Pass);
        assert_eq!(status(5e-8), CheckStatus::Warn);
        assert_eq!(status(5e-7), CheckStatus::Fail);
    }

    #[test]
    fn nonpositive_cutoff_rejected() {
        let consts = PhysicalConstants::CODATA2018;
        let geom = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
        let d = paper_drive();
        assert!(validate_regime(&d, &geom, 0.0, &consts).is_err());
        assert!(validate_regime(&d, &geom, -1.0, &consts).is_err());
    }

    #[test]
    fn report_is_pure() {
        let consts = PhysicalConstants::CODATA2018;
        let geom = CoaxGeometry::new(2e-3, 3e-6, 0.5).unwrap();
        let d = Drive::new(4e10, 2e-9).unwrap();
        let a = validate_regime(&d, &geom, 2e11, &consts).unwrap();
        let b = validate_regime(&d, &geom, 2e11, &consts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn plate_short_distance() {
        let consts = PhysicalConstants::CODATA2018;
        let d = paper_drive();
        let ok = validate_plates(&d, &PlateGeometry::new(9e-4, 1e-6).unwrap(), &consts);
        assert!(ok.is_valid());
        let bad = validate_plates(&d, &PlateGeometry::new(9e-4, 1e-1).unwrap(), &consts);
        assert_eq!(bad.check(CHECK_SHORT_DISTANCE).unwrap().status, CheckStatus::Fail);
    }
}
