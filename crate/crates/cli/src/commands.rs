//! The five operations. Each returns its records together with the CSV
//! table and an outcome that decides the exit status.

use std::collections::BTreeMap;

use dce_core::quantities::{
    validate_plates, validate_regime, CheckStatus, ValidityCheck, ValidityReport, CHECK_TEM_ONLY,
};
use dce_core::rates::{
    coax_rate_small_gap_with_cutoffs, coax_rate_value, coax_rate_with_cutoffs, emission_spectrum,
    plate_rate, EmissionResult, FormulaTag, SpectrumGrid, ORACLE_CUTOFF_FACTOR,
};
use dce_core::specfun::{find_cutoffs, CutoffTable, BRACKET_LIMIT, DEFAULT_M_MAX, DEFAULT_P_MAX};
use dce_core::{Exec, PhysicalConstants};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{
    Formula, GeometryKind, GridKind, Operation, Params, RunConfig, SweepAxis,
};
use crate::output::{num, opt_num, status_str, Inputs, OutputRecord, Provenance, Table, Validity};
use crate::units::{self, Dimension};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Success,
    ValidityFailure,
    NumericalFailure,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::ValidityFailure => 3,
            Outcome::NumericalFailure => 4,
        }
    }

    fn from_status(status: CheckStatus) -> Self {
        if status == CheckStatus::Fail {
            Outcome::ValidityFailure
        } else {
            Outcome::Success
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<OutputRecord>,
    pub table: Table,
    pub outcome: Outcome,
}

const CHECK_COLUMNS: &[&str] = &[
    "tem_only",
    "perturbative",
    "nonrelativistic",
    "long_guide",
    "short_distance",
    "small_gap",
];

/// Run the operation selected in `cfg`. `threads` bounds sweep concurrency.
pub fn run(cfg: &RunConfig, threads: Option<usize>) -> Result<Report, CliError> {
    let op = cfg
        .operation
        .ok_or_else(|| CliError::Usage("no operation given (rate, cutoff, spectrum, sweep or validate)".into()))?;
    let params = cfg.params()?;
    match op {
        Operation::Rate => rate(cfg, &params),
        Operation::Cutoff => cutoff(cfg, &params),
        Operation::Spectrum => spectrum(cfg, &params),
        Operation::Sweep => sweep(cfg, &params, threads),
        Operation::Validate => validate(cfg, &params),
    }
}

fn consts() -> PhysicalConstants {
    PhysicalConstants::CODATA2018
}

fn geometry(cfg: &RunConfig, op: Operation) -> Result<GeometryKind, CliError> {
    cfg.geometry.ok_or_else(|| {
        CliError::Usage(format!("{} needs a geometry: coax or plates", op.as_str()))
    })
}

fn cutoff_orders(cfg: &RunConfig) -> (u32, u32) {
    (
        cfg.m_max.unwrap_or(DEFAULT_M_MAX),
        cfg.p_max.unwrap_or(DEFAULT_P_MAX),
    )
}

fn cutoff_table(cfg: &RunConfig, params: &Params) -> Result<CutoffTable, CliError> {
    let (m_max, p_max) = cutoff_orders(cfg);
    Ok(find_cutoffs(&params.coax_cross_section()?, m_max, p_max, &consts())?)
}

fn emission(cfg: &RunConfig, kind: GeometryKind, params: &Params) -> Result<EmissionResult, CliError> {
    let k = consts();
    match kind {
        GeometryKind::Coax => {
            let g = params.coax()?;
            let d = params.drive("drho0")?;
            let table = cutoff_table(cfg, params)?;
            Ok(match cfg.formula.unwrap_or_default() {
                Formula::General => coax_rate_with_cutoffs(&g, &d, &k, &table)?,
                Formula::SmallGap => coax_rate_small_gap_with_cutoffs(&g, &d, &k, &table)?,
            })
        }
        GeometryKind::Plates => Ok(plate_rate(&params.plates()?, &params.drive("dz0")?, &k)),
    }
}

fn rate_provenance(cfg: &RunConfig, r: &EmissionResult) -> Provenance {
    let p = Provenance::new(r.formula_tag.as_str());
    if r.geometry_tag == dce_core::rates::GeometryTag::Coax {
        let (m_max, p_max) = cutoff_orders(cfg);
        p.with("cutoff_m_max", f64::from(m_max))
            .with("cutoff_p_max", f64::from(p_max))
    } else {
        p
    }
}

fn check_cells(report: &ValidityReport) -> Vec<String> {
    CHECK_COLUMNS
        .iter()
        .map(|name| opt_num(report.check(name).map(|c| c.ratio)))
        .collect()
}

fn rate(cfg: &RunConfig, params: &Params) -> Result<Report, CliError> {
    let kind = geometry(cfg, Operation::Rate)?;
    let r = emission(cfg, kind, params)?;
    let inputs = Inputs::from_params(params);
    let mut header = vec![
        "geometry", "formula_tag", "rate_per_s", "photon_omega_rad_s", "a_m", "b_m", "L_m", "A_m2",
        "omega0_rad_s", "amplitude_m", "validity",
    ];
    header.extend(CHECK_COLUMNS.iter().copied());
    let mut table = Table::new(&header);
    let mut row = vec![
        kind_str(kind).to_string(),
        r.formula_tag.as_str().to_string(),
        num(r.rate),
        num(r.photon_frequency),
        opt_num(inputs.a_m),
        opt_num(inputs.b_m),
        opt_num(inputs.length_m),
        opt_num(inputs.area_m2),
        opt_num(inputs.omega0_rad_s),
        opt_num(inputs.amplitude_m),
        status_str(r.validity.status()).to_string(),
    ];
    row.extend(check_cells(&r.validity));
    table.push(row);
    let record = OutputRecord {
        operation: "rate".into(),
        geometry: Some(kind),
        inputs,
        results: json!({
            "rate_per_s": r.rate,
            "photon_omega_rad_s": r.photon_frequency,
        }),
        validity: Validity::from(&r.validity),
        provenance: rate_provenance(cfg, &r),
    };
    Ok(Report {
        records: vec![record],
        table,
        outcome: Outcome::from_status(r.validity.status()),
    })
}

fn kind_str(kind: GeometryKind) -> &'static str {
    match kind {
        GeometryKind::Coax => "coax",
        GeometryKind::Plates => "plates",
    }
}

fn tem_only_check(omega0: f64, cutoff: f64) -> ValidityCheck {
    let ratio = omega0 / cutoff;
    ValidityCheck {
        name: CHECK_TEM_ONLY.to_string(),
        ratio,
        threshold: 1.0,
        status: if ratio < 1.0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        note: "omega0 / lowest TE/TM cutoff".to_string(),
    }
}

fn cutoff(cfg: &RunConfig, params: &Params) -> Result<Report, CliError> {
    let table = cutoff_table(cfg, params)?;
    let (m_max, p_max) = cutoff_orders(cfg);
    let min = table.min_entry().copied();
    let check_omega = cfg
        .check_f0
        .as_deref()
        .map(|s| units::parse(Dimension::AngularFrequency, s))
        .transpose()?;
    let mut report = ValidityReport::default();
    if let (Some(omega0), Some(m)) = (check_omega, &min) {
        report.push(tem_only_check(omega0, m.omega));
    }
    let check = report.check(CHECK_TEM_ONLY).cloned();

    let mut csv = Table::new(&[
        "family", "m", "p", "k_per_m", "omega_rad_s", "global_min", "check_f0_ratio", "check_f0_status", "status",
    ]);
    let mut rows = Vec::new();
    for (i, e) in table.entries.iter().enumerate() {
        let is_min = i == 0;
        rows.push(json!({
            "family": e.family.to_string(),
            "m": e.m,
            "p": e.p,
            "k_per_m": e.k,
            "omega_rad_s": e.omega,
            "global_min": is_min,
        }));
        let (ratio, status) = match (&check, is_min) {
            (Some(c), true) => (num(c.ratio), status_str(c.status).to_string()),
            _ => (String::new(), String::new()),
        };
        csv.push(vec![
            e.family.to_string(),
            e.m.to_string(),
            e.p.to_string(),
            num(e.k),
            num(e.omega),
            is_min.to_string(),
            ratio,
            status,
            "ok".into(),
        ]);
    }
    let failures: Vec<_> = table
        .failures
        .iter()
        .map(|f| {
            let msg = format!("found {} of {} roots below k = {:e} 1/m", f.found, f.wanted, f.k_limit);
            csv.push(vec![
                f.family.to_string(),
                f.m.to_string(),
                String::new(),
                String::new(),
                String::new(),
                "false".into(),
                String::new(),
                String::new(),
                msg.clone(),
            ]);
            json!({ "family": f.family.to_string(), "m": f.m, "error": msg })
        })
        .collect();

    let mut inputs = Inputs::from_params(params);
    inputs.omega0_rad_s = check_omega;
    inputs.amplitude_m = None;
    inputs.v0_m_s = None;
    let outcome = if !table.is_complete() {
        Outcome::NumericalFailure
    } else {
        Outcome::from_status(report.status())
    };
    let record = OutputRecord {
        operation: "cutoff".into(),
        geometry: Some(GeometryKind::Coax),
        inputs,
        results: json!({
            "entries": rows,
            "global_min": min.map(|m| json!({
                "family": m.family.to_string(),
                "m": m.m,
                "p": m.p,
                "omega_rad_s": m.omega,
            })),
            "failures": failures,
        }),
        validity: Validity::from(&report),
        provenance: Provenance::new("cutoff-table")
            .with("m_max", f64::from(m_max))
            .with("p_max", f64::from(p_max))
            .with("k_limit_gap_units", BRACKET_LIMIT),
    };
    Ok(Report {
        records: vec![record],
        table: csv,
        outcome,
    })
}

fn spectrum(cfg: &RunConfig, params: &Params) -> Result<Report, CliError> {
    let k = consts();
    let g = params.coax()?;
    let d = params.drive("drho0")?;
    let dt = params.dt(d.omega0())?;
    let factor = cfg.omega_max_factor.unwrap_or(ORACLE_CUTOFF_FACTOR);
    let grid = match cfg.grid.unwrap_or_default() {
        GridKind::Modes => SpectrumGrid::Modes {
            omega_max_factor: factor,
        },
        GridKind::Uniform => {
            let freq = |s: &Option<String>| {
                s.as_deref()
                    .map(|s| units::parse(Dimension::AngularFrequency, s))
                    .transpose()
            };
            SpectrumGrid::Uniform {
                omega_min: freq(&cfg.omega_min)?.unwrap_or(0.0),
                omega_max: freq(&cfg.omega_max)?.unwrap_or(factor * d.omega0()),
                points: cfg.points.unwrap_or(2001),
            }
        }
    };
    let s = emission_spectrum(&g, &d, dt, &k, &grid, Exec::default())?;
    let table = cutoff_table(cfg, params)?;
    let cutoff = table
        .min_cutoff()
        .ok_or_else(|| dce_core::Error::Domain("no TE/TM cutoff found".into()))?;
    let validity = validate_regime(&d, &g, cutoff, &k)?;
    let closed = coax_rate_value(&g, &d, &k);

    let mut csv = Table::new(&["n", "omega_rad_s", "probability", "dN_domega"]);
    let mut samples = Vec::with_capacity(s.samples.len());
    for x in &s.samples {
        csv.push(vec![
            x.n_index.map(|n| n.to_string()).unwrap_or_default(),
            num(x.omega),
            num(x.probability),
            num(x.dn_domega),
        ]);
        samples.push(json!({
            "n": x.n_index,
            "omega_rad_s": x.omega,
            "probability": x.probability,
            "dN_domega": x.dn_domega,
        }));
    }
    let provenance = match grid {
        SpectrumGrid::Modes { omega_max_factor } => Provenance::new(FormulaTag::DiscreteOracle.as_str())
            .with("omega_max_factor", omega_max_factor),
        SpectrumGrid::Uniform { omega_min, omega_max, points } => Provenance::new("continuum-density")
            .with("omega_min_rad_s", omega_min)
            .with("omega_max_rad_s", omega_max)
            .with("points", points as f64),
    };
    let record = OutputRecord {
        operation: "spectrum".into(),
        geometry: Some(GeometryKind::Coax),
        inputs: Inputs::from_params(params),
        results: json!({
            "samples": samples,
            "peak_omega_rad_s": s.peak_omega,
            "grid_step_rad_s": s.grid_step,
            "integral": s.integral,
            "rate_per_s": s.rate(),
            "closed_form_rate_per_s": closed,
            "modes_under_main_lobe": 2.0 * g.length() / (k.c() * dt),
            "fwhm_rad_s": s.fwhm,
            "fwhm_scale": s.fwhm_scale,
        }),
        validity: Validity::from(&validity),
        provenance,
    };
    Ok(Report {
        records: vec![record],
        table: csv,
        outcome: Outcome::from_status(validity.status()),
    })
}

/// Least-squares exponents of `value ~ prod x_i^s_i`.
pub fn log_log_slopes(points: &[Vec<f64>], values: &[f64]) -> Option<Vec<f64>> {
    let usable: Vec<usize> = (0..values.len())
        .filter(|&i| values[i] > 0.0 && values[i].is_finite() && points[i].iter().all(|&x| x > 0.0))
        .collect();
    let dims = points.first()?.len();
    if usable.len() < dims + 1 {
        return None;
    }
    let design = DMatrix::from_fn(usable.len(), dims + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            points[usable[r]][c - 1].ln()
        }
    });
    let rhs = DVector::from_iterator(usable.len(), usable.iter().map(|&i| values[i].ln()));
    let coef = design.svd(true, true).solve(&rhs, 1e-12).ok()?;
    Some(coef.iter().skip(1).copied().collect())
}

fn grid_points(axes: &[SweepAxis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        let values = axis.values();
        acc.into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn sweep(cfg: &RunConfig, params: &Params, threads: Option<usize>) -> Result<Report, CliError> {
    let kind = geometry(cfg, Operation::Sweep)?;
    if cfg.axes.is_empty() {
        return Err(CliError::Usage("sweep needs at least one --axis".into()));
    }
    let axes = cfg
        .axes
        .iter()
        .map(|s| SweepAxis::parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, axis) in axes.iter().enumerate() {
        if axes[..i].iter().any(|x| x.name == axis.name) {
            return Err(CliError::Usage(format!("axis `{}` given twice", axis.name)));
        }
    }
    let points = grid_points(&axes);
    let point_params = points
        .iter()
        .map(|point| {
            let mut p = *params;
            for (axis, &v) in axes.iter().zip(point) {
                p.set(&axis.name, v)?;
            }
            Ok(p)
        })
        .collect::<Result<Vec<Params>, CliError>>()?;
    let eval = |p: &Params| emission(cfg, kind, p);
    let results: Vec<Result<EmissionResult, CliError>> = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("DCE_NUM_THREADS: {e}")))?
            .install(|| point_params.par_iter().map(eval).collect()),
        None => point_params.par_iter().map(eval).collect(),
    };

    let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    let mut header = vec!["row"];
    header.extend(&names);
    header.extend(["rate_per_s", "validity", "error"]);
    let mut csv = Table::new(&header);
    let mut records = Vec::with_capacity(points.len() + 1);
    let mut outcome = Outcome::Success;
    let mut rates = Vec::with_capacity(points.len());
    let mut worst = CheckStatus::Pass;
    let mut failed = 0usize;
    for (i, ((point, p), result)) in points.iter().zip(&point_params).zip(&results).enumerate() {
        let coords: BTreeMap<&str, f64> = names.iter().copied().zip(point.iter().copied()).collect();
        let mut row = vec![i.to_string()];
        row.extend(point.iter().map(|&v| num(v)));
        match result {
            Ok(r) => {
                let status = r.validity.status();
                worst = worst.max(status);
                outcome = outcome.max(Outcome::from_status(status));
                rates.push(r.rate);
                row.extend([num(r.rate), status_str(status).to_string(), String::new()]);
                records.push(OutputRecord {
                    operation: "sweep".into(),
                    geometry: Some(kind),
                    inputs: Inputs::from_params(p),
                    results: json!({ "index": i, "point": coords, "rate_per_s": r.rate }),
                    validity: Validity::from(&r.validity),
                    provenance: rate_provenance(cfg, r),
                });
            }
            Err(e) => {
                failed += 1;
                worst = CheckStatus::Fail;
                outcome = Outcome::NumericalFailure;
                rates.push(f64::NAN);
                row.extend([String::new(), "fail".into(), e.to_string()]);
                records.push(OutputRecord {
                    operation: "sweep".into(),
                    geometry: Some(kind),
                    inputs: Inputs::from_params(p),
                    results: json!({ "index": i, "point": coords, "error": e.to_string() }),
                    validity: Validity::failed(),
                    provenance: Provenance::new("none"),
                });
            }
        }
        csv.push(row);
    }

    let slopes = log_log_slopes(&points, &rates);
    let mut summary = vec!["slope".to_string()];
    match &slopes {
        Some(s) => summary.extend(s.iter().map(|&x| num(x))),
        None => summary.extend(names.iter().map(|_| String::new())),
    }
    let fit_note = if slopes.is_none() {
        "not enough positive points for a log-log fit".to_string()
    } else {
        String::new()
    };
    summary.extend([String::new(), status_str(worst).to_string(), fit_note.clone()]);
    csv.push(summary);
    let slope_map: BTreeMap<&str, f64> = match &slopes {
        Some(s) => names.iter().copied().zip(s.iter().copied()).collect(),
        None => BTreeMap::new(),
    };
    records.push(OutputRecord {
        operation: "sweep-summary".into(),
        geometry: Some(kind),
        inputs: Inputs::from_params(params),
        results: json!({
            "slopes": slope_map,
            "points": points.len(),
            "failed_points": failed,
            "fit_error": if fit_note.is_empty() { None } else { Some(fit_note) },
        }),
        validity: Validity {
            status: worst,
            checks: Vec::new(),
        },
        provenance: Provenance::new("log-log-least-squares"),
    });
    Ok(Report {
        records,
        table: csv,
        outcome,
    })
}

fn validate(cfg: &RunConfig, params: &Params) -> Result<Report, CliError> {
    let k = consts();
    let kind = cfg.geometry.unwrap_or(GeometryKind::Coax);
    let (report, results, provenance) = match kind {
        GeometryKind::Coax => {
            let g = params.coax()?;
            let d = params.drive("drho0")?;
            let table = cutoff_table(cfg, params)?;
            let min = table
                .min_entry()
                .ok_or_else(|| dce_core::Error::Domain("no TE/TM cutoff found".into()))?;
            let (m_max, p_max) = cutoff_orders(cfg);
            (
                validate_regime(&d, &g, min.omega, &k)?,
                json!({
                    "min_cutoff_rad_s": min.omega,
                    "min_cutoff_mode": format!("{}{}{}", min.family, min.m, min.p),
                }),
                Provenance::new("regime-checks")
                    .with("cutoff_m_max", f64::from(m_max))
                    .with("cutoff_p_max", f64::from(p_max)),
            )
        }
        GeometryKind::Plates => (
            validate_plates(&params.drive("dz0")?, &params.plates()?, &k),
            json!({}),
            Provenance::new("regime-checks"),
        ),
    };
    let mut csv = Table::new(&["check", "ratio", "threshold", "status", "note"]);
    for c in &report.checks {
        csv.push(vec![
            c.name.clone(),
            num(c.ratio),
            num(c.threshold),
            status_str(c.status).to_string(),
            c.note.clone(),
        ]);
    }
    csv.push(vec![
        "overall".into(),
        String::new(),
        String::new(),
        status_str(report.status()).to_string(),
        String::new(),
    ]);
    let record = OutputRecord {
        operation: "validate".into(),
        geometry: Some(kind),
        inputs: Inputs::from_params(params),
        results,
        validity: Validity::from(&report),
        provenance,
    };
    Ok(Report {
        records: vec![record],
        table: csv,
        outcome: Outcome::from_status(report.status()),
    })
}
