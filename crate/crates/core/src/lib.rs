//! Spectral analysis of quantum and microwave billiards.
//!
//! The crate is split along the lines of a typical experiment:
//!
//! * [`billiard`] computes exact spectra of the circle-sector billiard, Weyl
//!   counting functions and spectra perturbed by a point-like scatterer.
//! * [`stats`] unfolds spectra and measures short- and long-range level
//!   correlations against Poisson, GOE and semi-Poisson references.
//! * [`resonance`] fits Breit-Wigner resonances to complex scattering traces
//!   and analyses the resulting strengths.
//! * [`rmt`] simulates the random-matrix scattering model with antenna and
//!   absorption channels.
//! * [`special`] holds the Bessel-function machinery the rest depends on.
//!
//! A narrative guide lives in the `book/` directory of the repository; its
//! code listings are compiled and run as doctests of this crate.

pub mod billiard;
pub mod error;
pub mod resonance;
pub mod rmt;
pub mod special;
pub mod stats;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a wavevector (1/m) to a frequency (Hz).
pub fn wavevector_to_frequency(k: f64) -> f64 {
    SPEED_OF_LIGHT * k / (2.0 * std::f64::consts::PI)
}

/// Converts a frequency (Hz) to a wavevector (1/m).
pub fn frequency_to_wavevector(f: f64) -> f64 {
    2.0 * std::f64::consts::PI * f / SPEED_OF_LIGHT
}

// The guide chapters are compiled as doctests so their listings stay in sync
// with the library.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/sector-billiard.md")]
    pub mod sector_billiard {}
    #[doc = include_str!("../../../book/src/point-scatterer.md")]
    pub mod point_scatterer {}
    #[doc = include_str!("../../../book/src/spectral-statistics.md")]
    pub mod spectral_statistics {}
    #[doc = include_str!("../../../book/src/missing-levels.md")]
    pub mod missing_levels {}
    #[doc = include_str!("../../../book/src/resonance-fitting.md")]
    pub mod resonance_fitting {}
    #[doc = include_str!("../../../book/src/strengths.md")]
    pub mod strengths {}
    #[doc = include_str!("../../../book/src/rmt-scattering.md")]
    pub mod rmt_scattering {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    pub mod command_line {}
}
