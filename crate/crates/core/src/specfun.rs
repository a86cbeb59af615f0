//! Integer-order Bessel functions, annular cross products and the TE/TM
//! cutoff search for the coaxial guide.
//!
//! Below [`ASYMPTOTIC_X`] the J ladder comes from Miller's backward
//! recurrence normalized by `J0 + 2 sum J_2k = 1`, and `Y0`, `Y1` from their
//! Neumann series in that ladder. Above it `J0`, `J1`, `Y0`, `Y1` come from
//! the Hankel asymptotic expansion. Higher orders of Y always use upward
//! recurrence; higher orders of J use upward recurrence only while the
//! order stays well below the argument.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::quantities::{CoaxGeometry, PhysicalConstants};

/// Crossover between the recurrence/Neumann scheme and the Hankel expansion.
pub const ASYMPTOTIC_X: f64 = 25.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE_LIMIT: f64 = 1e250;

/// Orders `0..=max_order` of J and Y at the same argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselLadder {
    pub j: Vec<f64>,
    pub y: Vec<f64>,
}

impl BesselLadder {
    pub fn j_prime(&self, m: usize) -> f64 {
        derivative(&self.j, m)
    }

    pub fn y_prime(&self, m: usize) -> f64 {
        derivative(&self.y, m)
    }
}

// C'_m = (C_{m-1} - C_{m+1}) / 2 with C_{-1} = -C_1.
fn derivative(ladder: &[f64], m: usize) -> f64 {
    if m == 0 {
        -ladder[1]
    } else {
        0.5 * (ladder[m - 1] - ladder[m + 1])
    }
}

/// Normalized J_0..=J_top at `x > 0` by backward recurrence.
fn miller_j(top: usize, x: f64) -> Vec<f64> {
    let reach = (top as f64).max(x);
    let mut start = (reach + 40.0 + (60.0 * reach).sqrt()) as usize;
    start += start % 2;
    let mut ladder = vec![0.0; start + 2];
    ladder[start] = 1e-30;
    for k in (1..=start).rev() {
        let next = (2.0 * k as f64 / x) * ladder[k] - ladder[k + 1];
        ladder[k - 1] = next;
        if next.abs() > RESCALE_LIMIT {
            for v in &mut ladder[k - 1..] {
                *v /= RESCALE_LIMIT;
            }
        }
    }
    let norm = ladder[0] + 2.0 * ladder.iter().skip(2).step_by(2).sum::<f64>();
    for v in &mut ladder {
        *v /= norm;
    }
    ladder.truncate(start + 1);
    ladder
}

/// Hankel asymptotic P and Q for order `nu`.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 1 {
            q += signed;
        } else {
            p += signed;
        }
        if mag < 1e-18 * p.abs() {
            break;
        }
    }
    (p, q)
}

/// (J_nu, Y_nu) for nu in {0, 1} from the Hankel expansion.
fn hankel_jy(nu: u32, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu as f64, x);
    let (s, c) = x.sin_cos();
    // chi = x - (nu/2 + 1/4) pi, rotated exactly to avoid cancelling x - pi/4
    let (sin_chi, cos_chi) = match nu {
        0 => ((s - c) * FRAC_1_SQRT_2, (c + s) * FRAC_1_SQRT_2),
        _ => (-(s + c) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2),
    };
    let amp = (2.0 / (PI * x)).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

fn upward(ladder: &mut [f64], x: f64) {
    for k in 1..ladder.len() - 1 {
        ladder[k + 1] = (2.0 * k as f64 / x) * ladder[k] - ladder[k - 1];
    }
}

/// J_0..=J_max_order and Y_0..=Y_max_order at `x > 0`.
pub fn bessel_ladder(max_order: usize, x: f64) -> Result<BesselLadder> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "Bessel ladder needs a finite positive argument, got {x}"
        )));
    }
    let len = max_order.max(1) + 1;
    let mut y = vec![0.0; len];
    let mut j;
    if x < ASYMPTOTIC_X {
        let full = miller_j(len - 1, x);
        let log_term = (x / 2.0).ln() + EULER_GAMMA;
        let mut even = 0.0;
        let mut odd = 0.0;
        let mut k = 1;
        while 2 * k + 1 < full.len() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let kf = k as f64;
            even += sign * full[2 * k] / kf;
            odd += sign * (2.0 * kf + 1.0) / (kf * (kf + 1.0)) * full[2 * k + 1];
            k += 1;
        }
        y[0] = (2.0 / PI) * log_term * full[0] - (4.0 / PI) * even;
        y[1] = (2.0 / PI) * ((log_term - 1.0) * full[1] - full[0] / x - odd);
        j = full;
        j.truncate(len);
    } else {
        let (j0, y0) = hankel_jy(0, x);
        let (j1, y1) = hankel_jy(1, x);
        y[0] = y0;
        y[1] = y1;
        if ((len - 1) as f64) < 0.5 * x {
            j = vec![0.0; len];
            j[0] = j0;
            j[1] = j1;
            upward(&mut j, x);
        } else {
            j = miller_j(len - 1, x);
            j.truncate(len);
        }
    }
    upward(&mut y, x);
    j.truncate(max_order + 1);
    y.truncate(max_order + 1);
    Ok(BesselLadder { j, y })
}

/// Bessel function of the first kind `J_m(x)` for `x >= 0`.
///
/// Negative arguments are folded with `J_m(-x) = (-1)^m J_m(x)`.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_j(m, -x);
        return if m.is_multiple_of(2) { v } else { -v };
    }
    match bessel_ladder(m as usize, x) {
        Ok(l) => l.j[m as usize],
        Err(_) => f64::NAN,
    }
}

/// Bessel function of the second kind `Y_m(x)`; `x` must be positive.
pub fn bessel_y(m: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "Y_{m}(x) is singular for x <= 0 (x = {x})"
        )));
    }
    Ok(bessel_ladder(m as usize, x)?.y[m as usize])
}

/// `J'_m(x)` from `(J_{m-1} - J_{m+1}) / 2`.
pub fn bessel_j_prime(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 1 { 0.5 } else { 0.0 };
    }
    match bessel_ladder(m as usize + 1, x.abs()) {
        Ok(l) => {
            let v = l.j_prime(m as usize);
            // J'_m has parity (-1)^(m+1)
            if x < 0.0 && m.is_multiple_of(2) {
                -v
            } else {
                v
            }
        }
        Err(_) => f64::NAN,
    }
}

/// `Y'_m(x)` from `(Y_{m-1} - Y_{m+1}) / 2`.
pub fn bessel_y_prime(m: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "Y'_{m}(x) is singular for x <= 0 (x = {x})"
        )));
    }
    Ok(bessel_ladder(m as usize + 1, x)?.y_prime(m as usize))
}

fn check_radii(k: f64, r_in: f64, r_out: f64) -> Result<()> {
    if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
        return Err(Error::Domain(format!(
            "cross product needs 0 < r_in < r_out, got r_in = {r_in}, r_out = {r_out}"
        )));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain(format!(
            "radial wavenumber must be positive, got {k}"
        )));
    }
    Ok(())
}

pub(crate) fn cross_tm_raw(m: usize, k: f64, r1: f64, r2: f64) -> Result<f64> {
    let a = bessel_ladder(m, k * r1)?;
    let b = bessel_ladder(m, k * r2)?;
    Ok(a.j[m] * b.y[m] - b.j[m] * a.y[m])
}

pub(crate) fn cross_te_raw(m: usize, k: f64, r1: f64, r2: f64) -> Result<f64> {
    let a = bessel_ladder(m + 1, k * r1)?;
    let b = bessel_ladder(m + 1, k * r2)?;
    Ok(a.j_prime(m) * b.y_prime(m) - b.j_prime(m) * a.y_prime(m))
}

/// `J_m(k r_in) Y_m(k r_out) - J_m(k r_out) Y_m(k r_in)`; its zeros in `k`
/// are the TM cutoff wavenumbers of the annulus.
pub fn cross_product_tm(m: u32, k: f64, r_in: f64, r_out: f64) -> Result<f64> {
    check_radii(k, r_in, r_out)?;
    cross_tm_raw(m as usize, k, r_in, r_out)
}

/// `J'_m(k r_in) Y'_m(k r_out) - J'_m(k r_out) Y'_m(k r_in)`; its zeros in
/// `k` are the TE cutoff wavenumbers of the annulus.
pub fn cross_product_te(m: u32, k: f64, r_in: f64, r_out: f64) -> Result<f64> {
    check_radii(k, r_in, r_out)?;
    cross_te_raw(m as usize, k, r_in, r_out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeFamily {
    TE,
    TM,
}

impl fmt::Display for ModeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeFamily::TE => f.write_str("TE"),
            ModeFamily::TM => f.write_str("TM"),
        }
    }
}

impl ModeFamily {
    pub fn cross_product(self, m: u32, k: f64, r_in: f64, r_out: f64) -> Result<f64> {
        match self {
            ModeFamily::TE => cross_product_te(m, k, r_in, r_out),
            ModeFamily::TM => cross_product_tm(m, k, r_in, r_out),
        }
    }
}

/// Bracketing step in units of `1 / (r_out - r_in)`.
pub const BRACKET_STEP: f64 = 0.1;
/// Bracketing search limit in units of `1 / (r_out - r_in)`.
pub const BRACKET_LIMIT: f64 = 1e3;
/// Relative width at which bisection stops.
pub const BISECTION_RTOL: f64 = 1e-10;
pub const DEFAULT_M_MAX: u32 = 3;
pub const DEFAULT_P_MAX: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffEntry {
    pub family: ModeFamily,
    pub m: u32,
    pub p: u32,
    /// Radial cutoff wavenumber (1/m).
    pub k: f64,
    /// Cutoff angular frequency `c * k` (rad/s).
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffFailure {
    pub family: ModeFamily,
    pub m: u32,
    pub found: usize,
    pub wanted: usize,
    pub k_limit: f64,
}

impl From<&CutoffFailure> for Error {
    fn from(f: &CutoffFailure) -> Self {
        Error::RootNotBracketed {
            family: f.family,
            m: f.m,
            found: f.found,
            wanted: f.wanted,
            k_limit: f.k_limit,
        }
    }
}

/// TE/TM cutoffs of an annulus, sorted by ascending frequency.
///
/// A search that comes up short leaves its roots in `entries` and records
/// the shortfall in `failures`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffTable {
    pub entries: Vec<CutoffEntry>,
    pub failures: Vec<CutoffFailure>,
}

impl CutoffTable {
    /// Lowest non-TEM cutoff; the TEM-only threshold for the drive.
    pub fn min_entry(&self) -> Option<&CutoffEntry> {
        self.entries.first()
    }

    pub fn min_cutoff(&self) -> Option<f64> {
        self.min_entry().map(|e| e.omega)
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn ensure_complete(&self) -> Result<&Self> {
        match self.failures.first() {
            None => Ok(self),
            Some(f) => Err(f.into()),
        }
    }

    pub fn family(&self, family: ModeFamily, m: u32) -> impl Iterator<Item = &CutoffEntry> {
        self.entries
            .iter()
            .filter(move |e| e.family == family && e.m == m)
    }
}

/// Bracketing interval used for one root, kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First `count` zeros of the family's cross product for azimuthal order `m`.
///
/// The scan starts just above k = 0 and walks a uniform grid of step
/// `BRACKET_STEP / (r_out - r_in)` up to `BRACKET_LIMIT / (r_out - r_in)`;
/// every sign change is refined by bisection.
pub fn bracket_roots(
    family: ModeFamily,
    m: u32,
    r_in: f64,
    r_out: f64,
    count: usize,
) -> Result<(Vec<Bracket>, Option<CutoffFailure>)> {
    let gap = r_out - r_in;
    let step = BRACKET_STEP / gap;
    let k_limit = BRACKET_LIMIT / gap;
    // every TE/TM zero lies above m / r_out
    let k_start = 0.01 * step.min(f64::from(m.max(1)) / r_out);
    let f = |k: f64| family.cross_product(m, k, r_in, r_out);

    let mut roots = Vec::with_capacity(count);
    let mut lo = k_start;
    let mut f_lo = f(lo)?;
    let mut i: u64 = 1;
    while roots.len() < count {
        let hi = i as f64 * step;
        if hi > k_limit {
            break;
        }
        let f_hi = f(hi)?;
        if f_hi == 0.0 {
            roots.push(Bracket { lo, hi, root: hi });
        } else if (f_lo < 0.0) != (f_hi < 0.0) && f_lo != 0.0 {
            let root = bisect(&f, lo, hi, f_lo)?;
            roots.push(Bracket { lo, hi, root });
        }
        lo = hi;
        f_lo = f_hi;
        i += 1;
    }
    let failure = (roots.len() < count).then(|| CutoffFailure {
        family,
        m,
        found: roots.len(),
        wanted: count,
        k_limit,
    });
    Ok((roots, failure))
}

/// TE and TM cutoff tables for `m <= m_max` and the first `p_max` radial
/// zeros of each, evaluated concurrently over (family, m).
pub fn find_cutoffs_with(
    exec: Exec,
    geom: &CoaxGeometry,
    m_max: u32,
    p_max: u32,
    consts: &PhysicalConstants,
) -> Result<CutoffTable> {
    if p_max == 0 {
        return Err(Error::InvalidParameter {
            name: "p_max",
            value: 0.0,
            reason: "at least one radial zero is required",
        });
    }
    let (r_in, r_out) = (geom.inner_radius(), geom.outer_radius());
    let jobs: Vec<(ModeFamily, u32)> = [ModeFamily::TE, ModeFamily::TM]
        .into_iter()
        .flat_map(|fam| (0..=m_max).map(move |m| (fam, m)))
        .collect();
    let results = exec::map(exec, &jobs, |&(fam, m)| {
        bracket_roots(fam, m, r_in, r_out, p_max as usize).map(|r| (fam, m, r))
    });

    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        let (family, m, (brackets, failure)) = result?;
        entries.extend(brackets.iter().enumerate().map(|(i, b)| CutoffEntry {
            family,
            m,
            p: i as u32 + 1,
            k: b.root,
            omega: consts.c() * b.root,
        }));
        failures.extend(failure);
    }
    entries.sort_by(|x, y| {
        x.omega
            .total_cmp(&y.omega)
            .then(x.family.cmp(&y.family))
            .then(x.m.cmp(&y.m))
            .then(x.p.cmp(&y.p))
    });
    Ok(CutoffTable { entries, failures })
}

pub fn find_cutoffs(
    geom: &CoaxGeometry,
    m_max: u32,
    p_max: u32,
    consts: &PhysicalConstants,
) -> Result<CutoffTable> {
    find_cutoffs_with(Exec::default(), geom, m_max, p_max, consts)
}
