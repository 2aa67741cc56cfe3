//! Unfolding, nearest-neighbour spacing statistics, long-range correlation
//! measures, reference models and missing-level tooling.

mod curve;
mod generate;
mod ks;
mod longrange;
mod missing;
mod reference;
mod spacing;
mod unfold;

pub use curve::{CurveKind, StatCurve};
pub use generate::{generate_reference_ensemble, generate_reference_sequence, goe_counting, goe_eigenvalues};
pub use ks::{ks_distance, ks_to_model, SpacingSummary};
pub use longrange::{default_l_grid, dyson_mehta, number_variance};
pub use missing::{missing_level_scan, split_sequences, MissingLevel};
pub use reference::{reference_cdf, reference_curve, Model, Statistic};
pub use spacing::{cumulative_spacing, spacing_distribution, DEFAULT_BIN_WIDTH};
pub use unfold::{unfold, unfold_values, SmoothCounting, UnfoldedSpectrum, UnitDensity};
