//! Coax TEM modes and parallel-plate TM modes.
//!
//! The axial Fourier label `n` uses spacing `omega_n = |n| pi c / L`. Field
//! profiles are returned per unit mode amplitude; no operator algebra.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::quantities::{CoaxGeometry, PhysicalConstants, PlateGeometry};

/// Angular frequency of the axial label `n`: `|n| pi c / L`.
pub fn tem_frequency(n: i64, geom: &CoaxGeometry, consts: &PhysicalConstants) -> f64 {
    n.unsigned_abs() as f64 * PI * consts.c() / geom.length()
}

/// Spacing between consecutive TEM frequencies, `pi c / L`.
pub fn tem_spacing(geom: &CoaxGeometry, consts: &PhysicalConstants) -> f64 {
    PI * consts.c() / geom.length()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemMode {
    pub n: i64,
    pub omega: f64,
    /// Electric-field normalization `sqrt(hbar omega / (4 pi eps0 L log(1 + a/b)))`.
    pub norm: f64,
}

impl TemMode {
    /// `sgn(n)`: +1 for modes travelling towards +z.
    pub fn direction(&self) -> i8 {
        self.n.signum() as i8
    }
}

pub fn tem_mode(n: i64, geom: &CoaxGeometry, consts: &PhysicalConstants) -> Result<TemMode> {
    if n == 0 {
        return Err(Error::StaticMode);
    }
    let omega = tem_frequency(n, geom, consts);
    let norm = (consts.hbar() * omega
        / (4.0 * PI * consts.eps0() * geom.length() * geom.log_ratio()))
    .sqrt();
    Ok(TemMode { n, omega, norm })
}

fn check_annulus(rho: f64, geom: &CoaxGeometry) -> Result<()> {
    if rho >= geom.inner_radius() && rho <= geom.outer_radius() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "rho = {rho} m lies outside the annulus [{}, {}]",
            geom.inner_radius(),
            geom.outer_radius()
        )))
    }
}

/// Radial electric field `norm / rho` (V/m per unit amplitude).
pub fn tem_radial_field(mode: &TemMode, rho: f64, geom: &CoaxGeometry) -> Result<f64> {
    check_annulus(rho, geom)?;
    Ok(mode.norm / rho)
}

/// Azimuthal magnetic field of a TEM mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AzimuthalField {
    /// |B| in tesla per unit amplitude.
    pub magnitude: f64,
    /// Sign of the phi component, `sgn(n)`.
    pub orientation: i8,
}

impl AzimuthalField {
    pub fn b_phi(&self) -> f64 {
        f64::from(self.orientation) * self.magnitude
    }
}

/// `B = sgn(n) z_hat x E / c`; with E radial this is azimuthal.
pub fn tem_magnetic_field(
    mode: &TemMode,
    rho: f64,
    geom: &CoaxGeometry,
    consts: &PhysicalConstants,
) -> Result<AzimuthalField> {
    let e = tem_radial_field(mode, rho, geom)?;
    Ok(AzimuthalField {
        magnitude: e / consts.c(),
        orientation: mode.direction(),
    })
}

/// Number of nonzero labels with `omega_n <= omega_max`.
pub fn tem_mode_count(omega_max: f64, geom: &CoaxGeometry, consts: &PhysicalConstants) -> u64 {
    2 * max_index(omega_max, geom, consts)
}

/// Largest `n >= 0` with `omega_n <= omega_max`.
pub fn max_index(omega_max: f64, geom: &CoaxGeometry, consts: &PhysicalConstants) -> u64 {
    if !(omega_max > 0.0) {
        return 0;
    }
    let spacing = tem_spacing(geom, consts);
    let mut n = (omega_max / spacing).floor() as u64;
    // guard the floor against rounding at exact multiples
    while n > 0 && tem_frequency(n as i64, geom, consts) > omega_max {
        n -= 1;
    }
    while tem_frequency(n as i64 + 1, geom, consts) <= omega_max {
        n += 1;
    }
    n
}

/// All TEM modes with `omega_n <= omega_max`, ordered `-1, 1, -2, 2, ...`.
pub fn tem_catalog(
    exec: Exec,
    omega_max: f64,
    geom: &CoaxGeometry,
    consts: &PhysicalConstants,
) -> Vec<TemMode> {
    let top = max_index(omega_max, geom, consts);
    exec::map_range(exec, 0..2 * top, |i| {
        let magnitude = (i / 2 + 1) as i64;
        let n = if i % 2 == 0 { -magnitude } else { magnitude };
        tem_mode(n, geom, consts).expect("catalog never emits n = 0")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateTmMode {
    pub n_vec: (i64, i64),
    pub ell: u32,
    /// In-plane wavenumber `|n| pi / sqrt(A)` (1/m).
    pub k_par: f64,
    pub omega: f64,
}

pub fn plate_parallel_wavenumber(n_vec: (i64, i64), geom: &PlateGeometry) -> f64 {
    let (nx, ny) = (n_vec.0 as f64, n_vec.1 as f64);
    nx.hypot(ny) * PI / geom.area().sqrt()
}

/// `c sqrt(k_par^2 + (ell pi / a)^2)`.
pub fn plate_frequency(k_par: f64, ell: u32, geom: &PlateGeometry, consts: &PhysicalConstants) -> f64 {
    let kz = f64::from(ell) * PI / geom.separation();
    consts.c() * k_par.hypot(kz)
}

pub fn plate_tm_mode(
    n_vec: (i64, i64),
    ell: u32,
    geom: &PlateGeometry,
    consts: &PhysicalConstants,
) -> Result<PlateTmMode> {
    if n_vec == (0, 0) && ell == 0 {
        return Err(Error::StaticMode);
    }
    let k_par = plate_parallel_wavenumber(n_vec, geom);
    Ok(PlateTmMode {
        n_vec,
        ell,
        k_par,
        omega: plate_frequency(k_par, ell, geom, consts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> PhysicalConstants {
        PhysicalConstants::CODATA2018
    }

    #[test]
    fn first_mode_of_three_cm_guide() {
        let g = CoaxGeometry::new(1e-2, 1e-6, 0.03).unwrap();
        let w = PI * consts().c() / 0.03;
        for n in [-1, 1] {
            let m = tem_mode(n, &g, &consts()).unwrap();
            assert_eq!(m.omega, w);
        }
        // c rounded to 3e8 gives 3.1416e10
        assert!((w - 3.1416e10).abs() / 3.1416e10 < 1e-3);
    }

    #[test]
    fn static_mode_rejected() {
        let g = CoaxGeometry::new(1e-2, 1e-6, 0.03).unwrap();
        assert_eq!(tem_mode(0, &g, &consts()), Err(Error::StaticMode));
        let p = PlateGeometry::new(9e-4, 1e-6).unwrap();
        assert_eq!(plate_tm_mode((0, 0), 0, &p, &consts()), Err(Error::StaticMode));
        assert!(plate_tm_mode((0, 0), 1, &p, &consts()).is_ok());
    }

    #[test]
    fn normalization_identity() {
        let k = consts();
        let g = CoaxGeometry::new(1e-2, 1e-6, 0.03).unwrap();
        let m = tem_mode(5, &g, &k).unwrap();
        let back = m.norm.powi(2) * 4.0 * PI * k.eps0() * g.length() * g.log_ratio() / k.hbar();
        assert!((back / m.omega - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radial_profile() {
        let k = consts();
        let g = CoaxGeometry::new(2e-3, 5e-4, 0.1).unwrap();
        let m = tem_mode(2, &g, &k).unwrap();
        let inner = tem_radial_field(&m, g.inner_radius(), &g).unwrap();
        let outer = tem_radial_field(&m, g.outer_radius(), &g).unwrap();
        let want = g.outer_radius() / g.inner_radius();
        assert!((inner / outer / want - 1.0).abs() < 1e-15);
        assert!(tem_radial_field(&m, g.inner_radius() / 2.0, &g).is_err());
        assert!(tem_radial_field(&m, g.outer_radius() * 1.01, &g).is_err());
    }

    #[test]
    fn magnetic_field_rules() {
        let k = consts();
        let g = CoaxGeometry::new(2e-3, 5e-4, 0.1).unwrap();
        let plus = tem_mode(3, &g, &k).unwrap();
        let minus = tem_mode(-3, &g, &k).unwrap();
        let rho = 2.2e-3;
        let e = tem_radial_field(&plus, rho, &g).unwrap();
        let b = tem_magnetic_field(&plus, rho, &g, &k).unwrap();
        assert!((b.magnitude * k.c() / e - 1.0).abs() < 1e-15);
        let b_minus = tem_magnetic_field(&minus, rho, &g, &k).unwrap();
        assert_eq!(b.b_phi(), -b_minus.b_phi());
        let at_b = tem_magnetic_field(&plus, g.inner_radius(), &g, &k).unwrap();
        assert_eq!(at_b.orientation, 1);
        assert!((at_b.magnitude - plus.norm / (g.inner_radius() * k.c())).abs() <= 1e-15 * at_b.magnitude);
    }

    #[test]
    fn catalog_order_and_count() {
        let k = consts();
        let g = CoaxGeometry::new(1e-3, 1e-6, 1.0).unwrap();
        let omega_max = 7.5 * tem_spacing(&g, &k);
        let cat = tem_catalog(Exec::default(), omega_max, &g, &k);
        let labels: Vec<i64> = cat.iter().map(|m| m.n).collect();
        assert_eq!(labels, vec![-1, 1, -2, 2, -3, 3, -4, 4, -5, 5, -6, 6, -7, 7]);
        assert_eq!(tem_mode_count(omega_max, &g, &k), 14);
        assert_eq!(cat, tem_catalog(Exec::Sequential, omega_max, &g, &k));
    }

    #[test]
    fn plate_dispersion() {
        let k = consts();
        let p = PlateGeometry::new(9e-4, 1e-6).unwrap();
        let standing = plate_tm_mode((0, 0), 1, &p, &k).unwrap();
        assert!((standing.omega / (PI * k.c() / 1e-6) - 1.0).abs() < 1e-15);
        let m = plate_tm_mode((3, 4), 0, &p, &k).unwrap();
        assert!((m.k_par - 5.0 * PI / 0.03).abs() < 1e-9);
        assert!((m.omega - k.c() * m.k_par).abs() <= 1e-15 * m.omega);
    }

    #[test]
    fn only_ell_zero_below_drive() {
        let k = consts();
        let p = PlateGeometry::new(9e-4, 1e-6).unwrap();
        let omega0 = 2.0 * PI * 1e10;
        let m = plate_tm_mode((0, 1), 1, &p, &k).unwrap();
        assert!(m.omega >= PI * k.c() / 1e-6);
        assert!(m.omega > omega0);
        assert!((PI * k.c() / 1e-6 - 9.42e14).abs() / 9.42e14 < 1e-3);
    }
}
