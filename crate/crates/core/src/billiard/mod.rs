//! Circle-sector billiard: exact spectra and modes, Weyl counting, and
//! spectra perturbed by a point-like scatterer.

mod geometry;
mod scatterer;
mod sector;
mod spectrum;
mod weyl;

pub mod setups;

pub use geometry::{DiskScatterer, SectorGeometry};
pub use scatterer::{mode_intensities_at, point_scatterer_spectrum, PointScattererSetup};
pub use sector::{sector_eigenvalues, sector_wavefunction, IntensityMap, SectorMode};
pub use spectrum::{ModeLabel, WavevectorSpectrum};
pub use weyl::{weyl_count, WeylParams};
