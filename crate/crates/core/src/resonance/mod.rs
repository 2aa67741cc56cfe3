//! Breit-Wigner resonance extraction from complex scattering traces,
//! strength statistics and field-intensity maps from frequency shifts.

mod field;
mod fit;
mod model;
mod peaks;
mod strength;
mod trace;

pub use field::field_intensity_from_shift;
pub use fit::{fit_resonances, fit_trace, ClusterReport, FitOptions, FittedResonance, ResonanceSet};
pub use model::{breit_wigner_model, Resonance};
pub use peaks::{detect_peaks, PeakGuess};
pub use strength::{k0_strength_pdf, strengths, StrengthSample, DEFAULT_STRENGTH_NEIGHBORS};
pub use trace::ComplexTrace;
