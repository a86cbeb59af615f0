//! Photon-pair emission from an oscillating boundary in a coaxial waveguide
//! and between parallel plates.
//!
//! The outer wall of a coax with inner radius `b` and gap `a` oscillates as
//! `drho0 cos(omega0 t)`. Below the lowest TE/TM cutoff only TEM pairs are
//! created, each photon at `omega0 / 2`, travelling in opposite directions
//! along the axis. The crate provides
//!
//! - [`quantities`]: constants, parameter types and regime checks,
//! - [`specfun`]: Bessel functions and the annular TE/TM cutoff search,
//! - [`modes`]: TEM and plate TM mode catalogs and field profiles,
//! - [`perturbation`]: matrix elements and first-order pair amplitudes,
//! - [`rates`]: closed-form rates, the discrete mode-sum oracle, spectra and
//!   the coax/plate comparison,
//! - [`exec`]: the rayon/sequential execution switch.

pub mod error;
pub mod exec;
pub mod modes;
pub mod perturbation;
pub mod quantities;
pub mod rates;
pub mod specfun;

pub use error::{Error, Result};
pub use exec::Exec;
pub use quantities::{CoaxGeometry, Drive, PhysicalConstants, PlateGeometry};

/// Library version recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
