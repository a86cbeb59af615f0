//! Emission rates: the closed forms for the coax and the parallel plates,
//! the finite-time discrete mode sum used as a brute-force check on them,
//! the emission spectrum and the matrix-element comparison between the two
//! geometries.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};
use crate::exec::{self, Exec};
use crate::modes::{max_index, tem_spacing};
use crate::perturbation::{coupling_factor, probability_at, StressContext};
use crate::quantities::{
    validate_plates, validate_regime, CheckStatus, CoaxGeometry, Drive, PhysicalConstants,
    PlateGeometry, ValidityCheck, ValidityReport, CHECK_SMALL_GAP,
};
use crate::specfun::{find_cutoffs, CutoffTable, DEFAULT_M_MAX, DEFAULT_P_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryTag {
    Coax,
    Plates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    General,
    SmallGap,
    GoldenRule,
    DiscreteOracle,
}

impl FormulaTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaTag::General => "general",
            FormulaTag::SmallGap => "small-gap",
            FormulaTag::GoldenRule => "golden-rule",
            FormulaTag::DiscreteOracle => "discrete-oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionResult {
    /// Pair emission rate (1/s).
    pub rate: f64,
    /// Frequency of each photon of a pair, `omega0 / 2` (rad/s).
    pub photon_frequency: f64,
    pub geometry_tag: GeometryTag,
    pub formula_tag: FormulaTag,
    pub validity: ValidityReport,
}

/// `L omega0^2 drho0^2 / (16 c (a + b)^2 log^2(1 + a/b))`.
pub fn coax_rate_value(geom: &CoaxGeometry, drive: &Drive, consts: &PhysicalConstants) -> f64 {
    let g = coupling_factor(geom);
    let w = drive.omega0();
    let d = drive.amplitude();
    geom.length() * w * w * d * d * g * g / (16.0 * consts.c())
}

/// Thin-gap limit `L omega0^2 drho0^2 / (16 c a^2)`.
pub fn coax_rate_small_gap_value(
    geom: &CoaxGeometry,
    drive: &Drive,
    consts: &PhysicalConstants,
) -> f64 {
    let w = drive.omega0();
    let d = drive.amplitude();
    let a = geom.gap();
    geom.length() * w * w * d * d / (16.0 * consts.c() * a * a)
}

/// `A omega0^3 dz0^2 / (64 c^2 a^2)`.
pub fn plate_rate_value(geom: &PlateGeometry, drive: &Drive, consts: &PhysicalConstants) -> f64 {
    let w = drive.omega0();
    let d = drive.amplitude();
    let a = geom.separation();
    let c = consts.c();
    geom.area() * w * w * w * d * d / (64.0 * c * c * a * a)
}

fn coax_validity(
    geom: &CoaxGeometry,
    drive: &Drive,
    consts: &PhysicalConstants,
    cutoffs: &CutoffTable,
) -> Result<ValidityReport> {
    let cutoff = cutoffs
        .min_cutoff()
        .ok_or_else(|| Error::Domain("cutoff table is empty".into()))?;
    validate_regime(drive, geom, cutoff, consts)
}

/// Coax rate with validity taken from a precomputed cutoff table.
pub fn coax_rate_with_cutoffs(
    geom: &CoaxGeometry,
    drive: &Drive,
    consts: &PhysicalConstants,
    cutoffs: &CutoffTable,
) -> Result<EmissionResult> {
    Ok(EmissionResult {
        rate: coax_rate_value(geom, drive, consts),
        photon_frequency: 0.5 * drive.omega0(),
        geometry_tag: GeometryTag::Coax,
        formula_tag: FormulaTag::General,
        validity: coax_validity(geom, drive, consts, cutoffs)?,
    })
}

/// Pair emission rate of the coax for arbitrary `a/b`.
///
/// Regime violations (including a drive above the lowest TE/TM cutoff) are
/// reported in `validity`, never as errors.
pub fn coax_rate(
    geom: &CoaxGeometry,
    drive: &Drive,
    consts: &PhysicalConstants,
) -> Result<EmissionResult> {
    let cutoffs = find_cutoffs(geom, DEFAULT_M_MAX, DEFAULT_P_MAX, consts)?;
    coax_rate_with_cutoffs(geom, drive, consts, &cutoffs)
}

pub fn coax_rate_small_gap_with_cutoffs(
    geom: &CoaxGeometry,
    drive: &Drive,
    consts: &PhysicalConstants,
    cutoffs: &CutoffTable,
) -> Result<EmissionResult> {
    let mut validity = coax_validity(geom, drive, consts, cutoffs)?;
    let ratio = geom.gap() / geom.inner_radius();
    validity.push(ValidityCheck {
        name: CHECK_SMALL_GAP.to_string(),
        ratio,
        threshold: 0.1,
        status: if ratio <= 0.1 {
            CheckStatus::Pass
        } else {
            CheckStatus::Warn
        },
        note: "a/b; relative error of the thin-gap formula is about a/b".to_string(),
    });
    Ok(EmissionResult {
        rate: coax_rate_small_gap_value(geom, drive, consts),
        photon_frequency: 0.5 * drive.omega0(),
        geometry_tag: GeometryTag::Coax,
        formula_tag: FormulaTag::SmallGap,
        validity,
    })
}

/// Thin-gap (`b >> a`) coax rate; warns when `a/b > 0.1`.
pub fn coax_rate_small_gap(
    geom: &CoaxGeometry,
    drive: &Drive,
    consts: &PhysicalConstants,
) -> Result<EmissionResult> {
    let cutoffs = find_cutoffs(geom, DEFAULT_M_MAX, DEFAULT_P_MAX, consts)?;
    coax_rate_small_gap_with_cutoffs(geom, drive, consts, &cutoffs)
}

/// Pair emission rate between parallel plates, valid for `omega0 a / (pi c) < 1`.
pub fn plate_rate(geom: &PlateGeometry, drive: &Drive, consts: &PhysicalConstants) -> EmissionResult {
    EmissionResult {
        rate: plate_rate_value(geom, drive, consts),
        photon_frequency: 0.5 * drive.omega0(),
        geometry_tag: GeometryTag::Plates,
        formula_tag: FormulaTag::GoldenRule,
        validity: validate_plates(drive, geom, consts),
    }
}

/// Default truncation of the mode sum, in units of `omega0`.
pub const ORACLE_CUTOFF_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub include_counter_rotating: bool,
    /// Keep one [`PairTerm`] per summed pair.
    pub breakdown: bool,
    /// Sum pairs with `omega_n <= cutoff_factor * omega0`.
    pub cutoff_factor: f64,
    pub exec: Exec,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            include_counter_rotating: false,
            breakdown: false,
            cutoff_factor: ORACLE_CUTOFF_FACTOR,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    pub n1: i64,
    pub n2: i64,
    pub omega: f64,
    pub probability: f64,
}

/// Finite-time photon-pair number from the explicit mode sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonNumber {
    pub delta_n: f64,
    pub dt: f64,
    /// Number of unordered pairs `{n, -n}` summed.
    pub pairs: u64,
    /// Highest summed index.
    pub n_max: u64,
    /// Upper bound on any single neglected pair probability.
    pub tail_bound_per_mode: f64,
    /// Upper bound on the neglected contribution to `delta_n / dt` per unit
    /// bandwidth above the truncation (photons/s per rad/s). Neglected pairs
    /// are off resonance and do not accumulate in time.
    pub tail_rate_per_bandwidth: f64,
    /// `(N_full - N_rotating) / N_rotating` when the counter-rotating drive
    /// is included.
    pub counter_rotating_correction: Option<f64>,
    pub breakdown: Vec<PairTerm>,
}

impl PhotonNumber {
    pub fn rate(&self) -> f64 {
        self.delta_n / self.dt
    }
}

/// Sum of pair probabilities over every `{n, -n}` with
/// `omega_n <= cutoff_factor * omega0`, each unordered pair counted once.
///
/// Partial sums run over fixed chunks in ascending `n`, so the result is
/// bit-identical for every execution strategy.
pub fn discrete_photon_number(
    geom: &CoaxGeometry,
    drive: &Drive,
    dt: f64,
    consts: &PhysicalConstants,
    opts: &OracleOptions,
) -> Result<PhotonNumber> {
    let dt = ensure_positive("dt", dt)?;
    let factor = ensure_positive("cutoff_factor", opts.cutoff_factor)?;
    if factor <= 0.5 {
        return Err(Error::InvalidParameter {
            name: "cutoff_factor",
            value: factor,
            reason: "truncation must lie above the resonance at omega0 / 2",
        });
    }
    let ctx = StressContext::new(*geom, *drive, *consts);
    let coupling = ctx.coupling();
    let spacing = tem_spacing(geom, consts);
    let omega_cut = factor * drive.omega0();
    let n_max = max_index(omega_cut, geom, consts);
    let omega_of = |i: u64| (i + 1) as f64 * spacing;

    let rotating = exec::sum_range(opts.exec, 0..n_max, |i| {
        probability_at(coupling, drive, omega_of(i), dt, false)
    });
    let (delta_n, correction) = if opts.include_counter_rotating {
        let full = exec::sum_range(opts.exec, 0..n_max, |i| {
            probability_at(coupling, drive, omega_of(i), dt, true)
        });
        let rel = if rotating > 0.0 {
            (full - rotating) / rotating
        } else {
            0.0
        };
        (full, Some(rel))
    } else {
        (rotating, None)
    };

    let breakdown = if opts.breakdown {
        exec::map_range(opts.exec, 0..n_max, |i| {
            let omega = omega_of(i);
            PairTerm {
                n1: (i + 1) as i64,
                n2: -((i + 1) as i64),
                omega,
                probability: probability_at(
                    coupling,
                    drive,
                    omega,
                    dt,
                    opts.include_counter_rotating,
                ),
            }
        })
    } else {
        Vec::new()
    };

    // omega / (2 omega - omega0) decreases above resonance
    let strength = drive.amplitude() * coupling * omega_cut / (2.0 * omega_cut - drive.omega0());
    let tail_bound_per_mode = strength * strength;
    let tail_rate_per_bandwidth = tail_bound_per_mode / (spacing * dt);

    Ok(PhotonNumber {
        delta_n,
        dt,
        pairs: n_max,
        n_max,
        tail_bound_per_mode,
        tail_rate_per_bandwidth,
        counter_rotating_correction: correction,
        breakdown,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectrumGrid {
    /// One sample per pair label `n >= 1` with `omega_n <= factor * omega0`.
    Modes { omega_max_factor: f64 },
    /// `points` evenly spaced frequencies using the continuum mode density.
    Uniform {
        omega_min: f64,
        omega_max: f64,
        points: usize,
    },
}

impl Default for SpectrumGrid {
    fn default() -> Self {
        SpectrumGrid::Modes {
            omega_max_factor: ORACLE_CUTOFF_FACTOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub omega: f64,
    /// Pair probability of a mode at this frequency.
    pub probability: f64,
    /// Pairs per unit angular frequency, `probability * L / (pi c)` (s/rad).
    pub dn_domega: f64,
    pub n_index: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionSpectrum {
    pub samples: Vec<SpectrumSample>,
    pub dt: f64,
    pub grid_step: f64,
    pub peak_omega: f64,
    /// Full width at half maximum of the main lobe (rad/s), if both
    /// half-maximum crossings lie on the grid.
    pub fwhm: Option<f64>,
    /// `fwhm * dt / (2 pi)`.
    pub fwhm_scale: Option<f64>,
    /// `integral dN/domega domega`, the pair number after `dt`.
    pub integral: f64,
}

impl EmissionSpectrum {
    /// Integrated spectrum divided by the elapsed time.
    pub fn rate(&self) -> f64 {
        self.integral / self.dt
    }
}

/// Spectral sample of the pair label `n`; identical for `n` and `-n`.
pub fn spectrum_sample(ctx: &StressContext, n: i64, dt: f64) -> Result<SpectrumSample> {
    if n == 0 {
        return Err(Error::StaticMode);
    }
    let dt = ensure_positive("dt", dt)?;
    let omega = ctx.omega(n);
    let density = 1.0 / tem_spacing(ctx.geometry(), ctx.constants());
    let p = probability_at(ctx.coupling(), ctx.drive(), omega, dt, false);
    Ok(SpectrumSample {
        omega,
        probability: p,
        dn_domega: p * density,
        n_index: Some(n),
    })
}

fn half_max_width(samples: &[SpectrumSample], peak: usize) -> Option<f64> {
    let half = 0.5 * samples[peak].dn_domega;
    let cross = |i: usize, j: usize| {
        let (a, b) = (&samples[i], &samples[j]);
        a.omega + (half - a.dn_domega) * (b.omega - a.omega) / (b.dn_domega - a.dn_domega)
    };
    let left = (0..peak).rev().find(|&i| samples[i].dn_domega < half)?;
    let right = (peak + 1..samples.len()).find(|&i| samples[i].dn_domega < half)?;
    Some(cross(right - 1, right) - cross(left, left + 1))
}

/// Finite-time emission spectrum on the requested grid.
pub fn emission_spectrum(
    geom: &CoaxGeometry,
    drive: &Drive,
    dt: f64,
    consts: &PhysicalConstants,
    grid: &SpectrumGrid,
    exec: Exec,
) -> Result<EmissionSpectrum> {
    let dt = ensure_positive("dt", dt)?;
    let ctx = StressContext::new(*geom, *drive, *consts);
    let spacing = tem_spacing(geom, consts);
    let density = 1.0 / spacing;

    let (samples, grid_step, integral) = match *grid {
        SpectrumGrid::Modes { omega_max_factor } => {
            let factor = ensure_positive("omega_max_factor", omega_max_factor)?;
            let n_max = max_index(factor * drive.omega0(), geom, consts);
            let samples = exec::map_range(exec, 1..n_max + 1, |n| {
                let omega = n as f64 * spacing;
                let p = probability_at(ctx.coupling(), drive, omega, dt, false);
                SpectrumSample {
                    omega,
                    probability: p,
                    dn_domega: p * density,
                    n_index: Some(n as i64),
                }
            });
            let integral = samples.iter().map(|s| s.probability).sum();
            (samples, spacing, integral)
        }
        SpectrumGrid::Uniform {
            omega_min,
            omega_max,
            points,
        } => {
            if points < 2 || !(omega_max > omega_min) || omega_min < 0.0 {
                return Err(Error::Domain(format!(
                    "uniform spectrum grid needs 0 <= omega_min < omega_max and >= 2 points, got [{omega_min}, {omega_max}] x {points}"
                )));
            }
            let step = (omega_max - omega_min) / (points - 1) as f64;
            let samples = exec::map_range(exec, 0..points as u64, |i| {
                let omega = omega_min + i as f64 * step;
                let p = probability_at(ctx.coupling(), drive, omega, dt, false);
                SpectrumSample {
                    omega,
                    probability: p,
                    dn_domega: p * density,
                    n_index: None,
                }
            });
            let inner: f64 = samples.iter().map(|s| s.dn_domega).sum();
            let ends = samples[0].dn_domega + samples[points - 1].dn_domega;
            (samples, step, step * (inner - 0.5 * ends))
        }
    };

    if samples.is_empty() {
        return Err(Error::Domain(
            "spectrum grid contains no modes; increase L or the frequency range".into(),
        ));
    }
    let peak = samples
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.dn_domega.total_cmp(&y.1.dn_domega))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let fwhm = half_max_width(&samples, peak);
    Ok(EmissionSpectrum {
        peak_omega: samples[peak].omega,
        fwhm,
        fwhm_scale: fwhm.map(|w| w * dt / (2.0 * PI)),
        samples,
        dt,
        grid_step,
        integral,
    })
}

/// Thin-gap comparison of the coax against the planar geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PfaComparison {
    /// coax / plate matrix element, `a / ((a + b) log(1 + a/b))`.
    pub matrix_ratio: f64,
    /// `matrix_ratio^2`.
    pub rate_ratio: f64,
    /// Leading-order estimate of `1 - matrix_ratio`, `a / (2b)`.
    pub first_order_error_estimate: f64,
}

pub fn pfa_compare(a: f64, b: f64) -> Result<PfaComparison> {
    let a = ensure_positive("a", a)?;
    let b = ensure_positive("b", b)?;
    let matrix_ratio = a / ((a + b) * (a / b).ln_1p());
    Ok(PfaComparison {
        matrix_ratio,
        rate_ratio: matrix_ratio * matrix_ratio,
        first_order_error_estimate: a / (2.0 * b),
    })
}
