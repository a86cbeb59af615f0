mod common;

use std::f64::consts::PI;

use common::rel;
use dce_core::perturbation::StressContext;
use dce_core::quantities::CHECK_TEM_ONLY;
use dce_core::rates::{
    coax_rate, coax_rate_small_gap, coax_rate_value, discrete_photon_number, emission_spectrum,
    plate_rate, plate_rate_value, spectrum_sample, OracleOptions, SpectrumGrid,
};
use dce_core::{CoaxGeometry, Drive, Exec, PhysicalConstants, PlateGeometry};

const C: f64 = 299_792_458.0;

fn omega0() -> f64 {
    2.0 * PI * 1e10
}

fn golden_drive() -> Drive {
    Drive::from_peak_speed(omega0(), 1e-7 * C).unwrap()
}

#[test]
fn plate_golden_value() {
    let k = PhysicalConstants::CODATA2018;
    let area = (2.0 * PI * C / omega0()).powi(2);
    let p = PlateGeometry::new(area, 1e-6).unwrap();
    let r = plate_rate(&p, &golden_drive(), &k);
    assert!(rel(r.rate, 8.8e3) < 0.01, "{}", r.rate);
    assert!(rel(r.rate, 8.84e3) < 2e-3);
    assert!(r.validity.is_valid());
}

#[test]
fn coax_golden_value() {
    let k = PhysicalConstants::CODATA2018;
    let l = 2.0 * PI * C / omega0();
    let g = CoaxGeometry::new(1e-3, 1e-6, l).unwrap();
    let general = coax_rate(&g, &golden_drive(), &k).unwrap();
    let thin = coax_rate_small_gap(&g, &golden_drive(), &k).unwrap();
    assert!(rel(general.rate, 5.6e3) < 0.02, "{}", general.rate);
    assert!(rel(thin.rate, 5.62e3) < 2e-3, "{}", thin.rate);
    assert_eq!(
        general.validity.check(CHECK_TEM_ONLY).unwrap().status,
        dce_core::quantities::CheckStatus::Pass
    );
    // plate over coax is 2 pi / 4 for these parameters
    let area = l * l;
    let p = PlateGeometry::new(area, 1e-6).unwrap();
    let ratio = plate_rate(&p, &golden_drive(), &k).rate / thin.rate;
    assert!(rel(ratio, PI / 2.0) < 1e-12);
    assert!(rel(ratio, 8.8 / 5.6) < 0.03);
}

#[test]
fn doubling_the_drive_frequency() {
    let k = PhysicalConstants::CODATA2018;
    let g = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
    let p = PlateGeometry::new(9e-4, 1e-6).unwrap();
    let d1 = Drive::new(omega0(), 1e-12).unwrap();
    let d2 = d1.with_omega0(2.0 * omega0()).unwrap();
    assert!(rel(coax_rate_value(&g, &d2, &k) / coax_rate_value(&g, &d1, &k), 4.0) < 1e-14);
    assert!(rel(plate_rate_value(&p, &d2, &k) / plate_rate_value(&p, &d1, &k), 8.0) < 1e-14);
}

#[test]
fn rates_scale_as_inverse_gap_squared() {
    let k = PhysicalConstants::CODATA2018;
    let d = Drive::new(omega0(), 1e-12).unwrap();
    let p1 = PlateGeometry::new(9e-4, 1e-6).unwrap();
    let p2 = PlateGeometry::new(9e-4, 2e-6).unwrap();
    assert!(rel(plate_rate_value(&p1, &d, &k) / plate_rate_value(&p2, &d, &k), 4.0) < 1e-14);
    let g1 = CoaxGeometry::new(1.0, 1e-6, 0.03).unwrap();
    let g2 = CoaxGeometry::new(1.0, 2e-6, 0.03).unwrap();
    let r = coax_rate_value(&g1, &d, &k) / coax_rate_value(&g2, &d, &k);
    assert!(rel(r, 4.0) < 1e-6);
}

#[test]
fn unit_audit() {
    // hbar and eps0 drop out; c enters as 1/c (coax) and 1/c^2 (plates)
    let base = PhysicalConstants::CODATA2018;
    let g = CoaxGeometry::new(1e-3, 1e-6, 0.03).unwrap();
    let p = PlateGeometry::new(9e-4, 1e-6).unwrap();
    let d = Drive::new(omega0(), 1e-12).unwrap();
    let scaled = [
        PhysicalConstants::new(base.c(), 3.0 * base.hbar(), base.eps0()).unwrap(),
        PhysicalConstants::new(base.c(), base.hbar(), 0.25 * base.eps0()).unwrap(),
    ];
    for k in scaled {
        assert_eq!(coax_rate_value(&g, &d, &k), coax_rate_value(&g, &d, &base));
        assert_eq!(plate_rate_value(&p, &d, &k), plate_rate_value(&p, &d, &base));
    }
    let fast = PhysicalConstants::new(2.0 * base.c(), base.hbar(), base.eps0()).unwrap();
    assert!(rel(coax_rate_value(&g, &d, &base) / coax_rate_value(&g, &d, &fast), 2.0) < 1e-14);
    assert!(rel(plate_rate_value(&p, &d, &base) / plate_rate_value(&p, &d, &fast), 4.0) < 1e-14);
}

fn oracle_setup(w0dt: f64) -> (CoaxGeometry, Drive, f64) {
    let dt = w0dt / omega0();
    // 2 L / (c dt) = 256 modes under the main lobe
    let g = CoaxGeometry::new(1e-3, 1e-6, 128.0 * C * dt).unwrap();
    (g, Drive::new(omega0(), 1e-12).unwrap(), dt)
}

#[test]
fn oracle_converges_to_closed_form() {
    let k = PhysicalConstants::CODATA2018;
    let mut errors = Vec::new();
    for w0dt in [1e2, 1e3, 1e4] {
        let (g, d, dt) = oracle_setup(w0dt);
        let n = discrete_photon_number(&g, &d, dt, &k, &OracleOptions::default()).unwrap();
        errors.push(rel(n.rate(), coax_rate_value(&g, &d, &k)));
    }
    assert!(errors[1] < 0.01, "{errors:?}");
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn oracle_pairs_opposite_labels() {
    let k = PhysicalConstants::CODATA2018;
    let (g, d, dt) = oracle_setup(1e2);
    let opts = OracleOptions {
        breakdown: true,
        ..OracleOptions::default()
    };
    let n = discrete_photon_number(&g, &d, dt, &k, &opts).unwrap();
    assert_eq!(n.breakdown.len() as u64, n.pairs);
    assert!(n.breakdown.iter().all(|t| t.n1 == -t.n2 && t.n1 > 0));
    let total: f64 = n.breakdown.iter().map(|t| t.probability).sum();
    assert!(rel(total, n.delta_n) < 1e-12);
}

#[test]
fn oracle_counter_rotating_correction() {
    let k = PhysicalConstants::CODATA2018;
    let (g, d, dt) = oracle_setup(1e3);
    let opts = OracleOptions {
        include_counter_rotating: true,
        ..OracleOptions::default()
    };
    let n = discrete_photon_number(&g, &d, dt, &k, &opts).unwrap();
    assert!(n.counter_rotating_correction.unwrap().abs() < 0.01);
    assert!(rel(n.rate(), coax_rate_value(&g, &d, &k)) < 0.02);
}

#[test]
fn oracle_bit_identical_across_strategies() {
    let k = PhysicalConstants::CODATA2018;
    let (g, d, dt) = oracle_setup(1e3);
    let run = |exec| {
        let opts = OracleOptions {
            exec,
            ..OracleOptions::default()
        };
        discrete_photon_number(&g, &d, dt, &k, &opts).unwrap()
    };
    let (a, b) = (run(Exec::Parallel), run(Exec::Sequential));
    assert_eq!(a.delta_n.to_bits(), b.delta_n.to_bits());
}

#[test]
fn spectrum_peak_and_integral() {
    let k = PhysicalConstants::CODATA2018;
    for w0dt in [1e3, 1e4] {
        let (g, d, dt) = oracle_setup(w0dt);
        let s = emission_spectrum(&g, &d, dt, &k, &SpectrumGrid::default(), Exec::default())
            .unwrap();
        assert!((s.peak_omega - omega0() / 2.0).abs() <= s.grid_step);
        assert!(rel(s.rate(), coax_rate_value(&g, &d, &k)) < 0.01);
        // main lobe of sinc^2(dw dt / 2) in the photon frequency
        let scale = s.fwhm_scale.unwrap();
        assert!((scale - 0.443).abs() < 0.02, "{scale}");
    }
}

#[test]
fn uniform_spectrum_integral() {
    let k = PhysicalConstants::CODATA2018;
    let (g, d, dt) = oracle_setup(1e3);
    let grid = SpectrumGrid::Uniform {
        omega_min: 0.0,
        omega_max: 4.0 * omega0(),
        points: 200_001,
    };
    let s = emission_spectrum(&g, &d, dt, &k, &grid, Exec::default()).unwrap();
    assert!(rel(s.rate(), coax_rate_value(&g, &d, &k)) < 0.01);
    assert!((s.peak_omega - omega0() / 2.0).abs() <= s.grid_step);
}

#[test]
fn spectrum_symmetric_in_label_sign() {
    let k = PhysicalConstants::CODATA2018;
    let (g, d, dt) = oracle_setup(1e3);
    let ctx = StressContext::new(g, d, k);
    for n in [1i64, 17, 256, 1000] {
        let plus = spectrum_sample(&ctx, n, dt).unwrap();
        let minus = spectrum_sample(&ctx, -n, dt).unwrap();
        assert_eq!(plus.dn_domega, minus.dn_domega);
        assert_eq!(plus.omega, minus.omega);
    }
}

#[test]
fn spectrum_strategies_agree() {
    let k = PhysicalConstants::CODATA2018;
    let (g, d, dt) = oracle_setup(1e3);
    let grid = SpectrumGrid::default();
    let a = emission_spectrum(&g, &d, dt, &k, &grid, Exec::Parallel).unwrap();
    let b = emission_spectrum(&g, &d, dt, &k, &grid, Exec::Sequential).unwrap();
    assert_eq!(a, b);
}
