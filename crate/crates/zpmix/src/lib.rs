//! Three-wave mixing in a uniaxial nonlinear crystal: birefringent
//! phase-matching geometry and zeropoint-field-seeded intensities for
//! spontaneous parametric down conversion (SPDC) and its up-conversion
//! counterpart (SPUC).
//!
//! A normally incident pump mixes with one vacuum mode of the zeropoint
//! field and emits a signal at the difference frequency. With an
//! ultraviolet pump every visible wavelength exits on a full cone and the
//! rainbow is a set of concentric circles. With an infrared pump the
//! vacuum mode is the high-frequency, extraordinarily polarized wave, its
//! index depends on its own direction, and the emission collapses onto
//! bright off-center arcs instead.
//!
//! Modules follow the pipeline: [`dispersion`] (Sellmeier indices),
//! [`phasematch`] (wave-vector matching and exit refraction),
//! [`coupledmode`] (linearized pair gain and its integration oracle),
//! [`radiometry`] (mode sums, cross sections, scan tables), [`cli`]
//! (commands and table formats).

pub mod cli;
pub mod config;
pub mod coupledmode;
pub mod dispersion;
pub mod error;
pub mod phasematch;
pub mod radiometry;
pub mod solver;

pub use error::{Error, Result};
