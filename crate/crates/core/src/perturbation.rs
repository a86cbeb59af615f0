//! Transition matrix elements of the wall-motion perturbation and the
//! first-order two-photon amplitudes.
//!
//! The perturbation is minus the work done on the moving wall, the surface
//! integral of the radial stress `(eps0/2)(E_rho^2 - B_phi^2)` evaluated at
//! the unperturbed boundary. For TEM modes both terms contribute equally and
//! only counter-propagating pairs `n2 = -n1` couple to the vacuum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::modes::{plate_frequency, plate_parallel_wavenumber, tem_frequency};
use crate::quantities::{CoaxGeometry, Drive, PhysicalConstants, PlateGeometry};

/// `1 / ((a + b) log(1 + a/b))` (1/m). Tends to `1/a` for a thin gap.
pub fn coupling_factor(geom: &CoaxGeometry) -> f64 {
    1.0 / (geom.outer_radius() * geom.log_ratio())
}

/// Geometry, drive and constants shared by the coax matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressContext {
    geom: CoaxGeometry,
    drive: Drive,
    consts: PhysicalConstants,
    coupling: f64,
}

impl StressContext {
    pub fn new(geom: CoaxGeometry, drive: Drive, consts: PhysicalConstants) -> Self {
        Self {
            geom,
            drive,
            consts,
            coupling: coupling_factor(&geom),
        }
    }

    pub fn geometry(&self) -> &CoaxGeometry {
        &self.geom
    }

    pub fn drive(&self) -> &Drive {
        &self.drive
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.consts
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn omega(&self, n: i64) -> f64 {
        tem_frequency(n, &self.geom, &self.consts)
    }
}

/// `<{n1, n2}| dV |0>` for a wall displacement `drho` (J).
pub fn coax_matrix_element(ctx: &StressContext, n1: i64, n2: i64, drho: f64) -> Result<f64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::StaticMode);
    }
    if n1 != -n2 {
        return Ok(0.0);
    }
    Ok(ctx.consts.hbar() * ctx.omega(n1) * drho * ctx.coupling)
}

fn plate_label_check(n_vec: (i64, i64), ell: u32) -> Result<()> {
    if n_vec == (0, 0) && ell == 0 {
        Err(Error::StaticMode)
    } else {
        Ok(())
    }
}

/// Force matrix element between TM pair states and the vacuum, times `-dz`.
///
/// Both frequency factors carry the in-plane label of the first photon,
/// `omega_{n1}^{ell1} omega_{n1}^{ell2}`; on the support `n2 = -n1` this is
/// the same as the symmetric form.
pub fn plate_matrix_element_general(
    geom: &PlateGeometry,
    n1_vec: (i64, i64),
    ell1: u32,
    n2_vec: (i64, i64),
    ell2: u32,
    dz: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    plate_label_check(n1_vec, ell1)?;
    plate_label_check(n2_vec, ell2)?;
    if n1_vec != (-n2_vec.0, -n2_vec.1) {
        return Ok(0.0);
    }
    let k_par = plate_parallel_wavenumber(n1_vec, geom);
    let w1 = plate_frequency(k_par, ell1, geom, consts);
    let w2 = plate_frequency(k_par, ell2, geom, consts);
    let weight = |ell: u32| if ell == 0 { 2.0 } else { 1.0 };
    let c = consts.c();
    let force = consts.hbar() / geom.separation() * (c * c * k_par * k_par + w1 * w2)
        / (weight(ell1) * weight(ell2) * w1 * w2).sqrt();
    Ok(-force * dz)
}

/// Plate matrix element restricted to the `ell = 0` branch, written for a
/// separation increase `drho`.
pub fn plate_matrix_element_tem(
    geom: &PlateGeometry,
    n1_vec: (i64, i64),
    n2_vec: (i64, i64),
    drho: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    plate_label_check(n1_vec, 0)?;
    plate_label_check(n2_vec, 0)?;
    if n1_vec != (-n2_vec.0, -n2_vec.1) {
        return Ok(0.0);
    }
    let omega = plate_frequency(plate_parallel_wavenumber(n1_vec, geom), 0, geom, consts);
    Ok(consts.hbar() * omega * drho / geom.separation())
}

/// `sin^2(dw T / 2) / dw^2`, with the removable limit `T^2 / 4` at `dw = 0`.
pub fn detuning_kernel(delta_omega: f64, dt: f64) -> f64 {
    let half = 0.5 * dt;
    let x = delta_omega * half;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    half * half * sinc * sinc
}

/// `integral_0^T exp(i w t) dt`, stable at `w -> 0`.
pub fn phase_integral(w: f64, t: f64) -> Complex64 {
    let x = 0.5 * w * t;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    Complex64::from_polar(t * sinc, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairAmplitude {
    pub n1: i64,
    pub n2: i64,
    pub value: Complex64,
    /// `omega_n1 + omega_n2 - omega0` (rad/s).
    pub delta_omega: f64,
}

impl PairAmplitude {
    pub fn probability(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// First-order amplitude of the pair `{n1, n2}` after time `dt`.
///
/// With `include_counter_rotating` the full `cos(omega0 t)` drive is kept;
/// otherwise only its resonant half.
pub fn pair_amplitude(
    ctx: &StressContext,
    n1: i64,
    n2: i64,
    dt: f64,
    include_counter_rotating: bool,
) -> Result<PairAmplitude> {
    let dt = ensure_positive("dt", dt)?;
    let element = coax_matrix_element(ctx, n1, n2, ctx.drive.amplitude())?;
    let sum = ctx.omega(n1) + ctx.omega(n2);
    let delta_omega = sum - ctx.drive.omega0();
    let mut time_integral = 0.5 * phase_integral(delta_omega, dt);
    if include_counter_rotating {
        time_integral += 0.5 * phase_integral(sum + ctx.drive.omega0(), dt);
    }
    let value = Complex64::new(0.0, -element / ctx.consts.hbar()) * time_integral;
    Ok(PairAmplitude {
        n1,
        n2,
        value,
        delta_omega,
    })
}

/// `|c_{n,-n}(dt)|^2` for a pair whose photons have frequency `omega`.
pub(crate) fn probability_at(
    coupling: f64,
    drive: &Drive,
    omega: f64,
    dt: f64,
    include_counter_rotating: bool,
) -> f64 {
    let strength = omega * drive.amplitude() * coupling;
    let delta_omega = 2.0 * omega - drive.omega0();
    if include_counter_rotating {
        let i = phase_integral(delta_omega, dt) + phase_integral(2.0 * omega + drive.omega0(), dt);
        strength * strength * 0.25 * i.norm_sqr()
    } else {
        strength * strength * detuning_kernel(delta_omega, dt)
    }
}

/// Probability of the pair `{n, -n}` after time `dt`.
pub fn pair_probability(
    ctx: &StressContext,
    n: i64,
    dt: f64,
    include_counter_rotating: bool,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::StaticMode);
    }
    let dt = ensure_positive("dt", dt)?;
    Ok(probability_at(
        ctx.coupling,
        &ctx.drive,
        ctx.omega(n),
        dt,
        include_counter_rotating,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ctx(b: f64, a: f64, l: f64, omega0: f64, amp: f64) -> StressContext {
        StressContext::new(
            CoaxGeometry::new(b, a, l).unwrap(),
            Drive::new(omega0, amp).unwrap(),
            PhysicalConstants::CODATA2018,
        )
    }

    #[test]
    fn selection_rule_and_zero_displacement() {
        let c = ctx(1e-3, 1e-6, 1.0, 1e10, 1e-10);
        assert_eq!(coax_matrix_element(&c, 3, 5, 1e-9).unwrap(), 0.0);
        assert_eq!(coax_matrix_element(&c, 3, 3, 1e-9).unwrap(), 0.0);
        assert_eq!(coax_matrix_element(&c, 3, -3, 0.0).unwrap(), 0.0);
        assert!(coax_matrix_element(&c, 3, -3, 1e-9).unwrap() > 0.0);
        assert_eq!(coax_matrix_element(&c, 0, 0, 1e-9), Err(Error::StaticMode));
    }

    #[test]
    fn symmetric_in_labels() {
        let c = ctx(1e-3, 1e-6, 1.0, 1e10, 1e-10);
        let x = coax_matrix_element(&c, 4, -4, 2e-10).unwrap();
        let y = coax_matrix_element(&c, -4, 4, 2e-10).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn coupling_limit() {
        let g = CoaxGeometry::new(1.0, 1e-3, 1.0).unwrap();
        let ratio = coupling_factor(&g) * 1e-3;
        // (a+b) log(1+a/b) = a (1 + a/(2b) + ...)
        assert!((1.0 - ratio - 0.5e-3).abs() < 1e-6);
    }

    #[test]
    fn plate_general_reduces_to_tem_branch() {
        let k = PhysicalConstants::CODATA2018;
        let p = PlateGeometry::new(9e-4, 1e-6).unwrap();
        for n in [(1, 0), (2, -3), (-7, 11)] {
            let drho = 3.3e-10;
            let general =
                plate_matrix_element_general(&p, n, 0, (-n.0, -n.1), 0, -drho, &k).unwrap();
            let tem = plate_matrix_element_tem(&p, n, (-n.0, -n.1), drho, &k).unwrap();
            assert!((general / tem - 1.0).abs() < 1e-14, "{n:?}");
        }
        assert_eq!(
            plate_matrix_element_general(&p, (1, 2), 0, (1, 2), 0, 1e-9, &k).unwrap(),
            0.0
        );
        assert_eq!(
            plate_matrix_element_general(&p, (1, 2), 1, (-1, -2), 0, 0.0, &k).unwrap(),
            0.0
        );
    }

    #[test]
    fn plate_general_mixed_branch_value() {
        // l1 = 0, l2 = 1: (hbar/a)(c^2 k^2 + w0 w1) / sqrt(2 w0 w1), times -dz
        let k = PhysicalConstants::CODATA2018;
        let p = PlateGeometry::new(1e-4, 2e-6).unwrap();
        let n = (2, 1);
        let kp = 5f64.sqrt() * PI / 1e-2;
        let w0 = k.c() * kp;
        let w1 = k.c() * kp.hypot(PI / 2e-6);
        let want = -(k.hbar() / 2e-6) * (k.c().powi(2) * kp * kp + w0 * w1) / (2.0 * w0 * w1).sqrt() * 1e-10;
        let got = plate_matrix_element_general(&p, n, 0, (-2, -1), 1, 1e-10, &k).unwrap();
        assert!((got / want - 1.0).abs() < 1e-13);
    }

    #[test]
    fn resonant_limit() {
        // choose L so that omega_1 = omega0 / 2 exactly up to rounding
        let k = PhysicalConstants::CODATA2018;
        let omega0 = 2.0 * PI * 1e10;
        let l = 2.0 * PI * k.c() / omega0;
        let c = ctx(1e-3, 1e-6, l, omega0, 1e-10);
        let dt = 100.0 / omega0;
        let p = pair_probability(&c, 1, dt, false).unwrap();
        let strength = c.omega(1) * 1e-10 * c.coupling();
        let want = strength * strength * dt * dt / 4.0;
        assert!((p / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_amplitude_gives_zero_probability() {
        let c = ctx(1e-3, 1e-6, 1.0, 1e10, 0.0);
        assert_eq!(pair_probability(&c, 7, 1e-8, false).unwrap(), 0.0);
        assert_eq!(pair_probability(&c, 7, 1e-8, true).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_matches_probability() {
        let c = ctx(1e-3, 1e-6, 2.0, 2.0 * PI * 1e10, 3e-10);
        for n in [1, 50, 133, -133, 400] {
            for flag in [false, true] {
                let a = pair_amplitude(&c, n, -n, 2e-8, flag).unwrap();
                let p = pair_probability(&c, n, 2e-8, flag).unwrap();
                assert!((a.probability() - p).abs() <= 1e-12 * p, "n = {n}, flag = {flag}");
            }
        }
        let off = pair_amplitude(&c, 3, 4, 2e-8, true).unwrap();
        assert_eq!(off.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn kernel_continuous_at_resonance() {
        let omega0 = 1e10;
        let dt = 100.0 / omega0;
        let at = detuning_kernel(0.0, dt);
        let near = detuning_kernel(1e-9 * omega0, dt);
        assert!(((at - near) / at).abs() < 1e-6);
        assert_eq!(at, dt * dt / 4.0);
    }

    #[test]
    fn rejects_nonpositive_time() {
        let c = ctx(1e-3, 1e-6, 1.0, 1e10, 1e-10);
        assert!(pair_probability(&c, 1, 0.0, false).is_err());
        assert!(pair_probability(&c, 0, 1.0, false).is_err());
    }
}
