use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The n = 0 axial label has zero frequency and carries no photons.
    #[error("mode index 0 is a static mode and carries no photons")]
    StaticMode,

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "root bracketing for {family} m={m} found {found} of {wanted} cutoffs below k = {k_limit:.6e} 1/m"
    )]
    RootNotBracketed {
        family: crate::specfun::ModeFamily,
        m: u32,
        found: usize,
        wanted: usize,
        k_limit: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

pub(crate) fn ensure_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and nonnegative",
        })
    }
}
