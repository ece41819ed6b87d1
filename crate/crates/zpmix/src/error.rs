//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "wavelength {lambda_um} um is outside the dispersion validity window [{min_um}, {max_um}] um"
    )]
    OutOfWindow {
        lambda_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("wavelength must be positive, got {0} um")]
    NonPositiveWavelength(f64),

    #[error("ODE oracle needs at least 2 steps, got {0}")]
    TooFewSteps(usize),

    #[error("undefined ratio: {0} side is dark at this point")]
    DarkRatio(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
