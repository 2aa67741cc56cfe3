//! Random-matrix model of a chaotic scattering system with two antenna
//! channels and absorption through weakly coupled fictitious channels.
//!
//! The scattering matrix is
//! `S(E) = 1 - 2 pi i W^T (E - H + i pi W W^T)^{-1} W`
//! with `H` drawn from the GOE and `W` a fixed real coupling matrix.
//! Energies and frequencies are measured in units of the mean level
//! spacing `d` at the band centre.

mod config;
mod ensemble;
mod goe;
mod observables;
mod smatrix;

pub use config::{coupling_for_transmission, transmission_for_coupling, RmtEnsembleConfig};
pub use ensemble::{ensemble_run, EnsembleStats, PairDistributions};
pub use goe::{mean_spacing, sample_goe, sample_goe_matrix, GoeSample};
pub use observables::{autocorrelation, correlation_width, element_distributions, transmission_from_average};
pub use smatrix::{build_couplings, smatrix_trace, Realization};
