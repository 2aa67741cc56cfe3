use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};

/// Real symmetric `dim x dim` GOE matrix with off-diagonal variance
/// `1/(4 dim)` and diagonal variance `1/(2 dim)`; its eigenvalue density
/// approaches a semicircle of radius one.
pub fn sample_goe_matrix(dim: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let n = dim as f64;
    let off = Normal::new(0.0, (0.25 / n).sqrt()).expect("finite variance");
    let diag = Normal::new(0.0, (0.5 / n).sqrt()).expect("finite variance");
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = diag.sample(rng);
        for j in i + 1..dim {
            let x = off.sample(rng);
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    h
}

/// Mean level spacing of the radius-one semicircle with `dim` levels,
/// averaged over the band `|E| <= band`:
/// `d = 1 / <rho>`, `rho(E) = (2 dim / pi) sqrt(1 - E^2)`.
pub fn mean_spacing(dim: usize, band: f64) -> f64 {
    let w = band.clamp(1e-12, 1.0);
    let mean_root = (w * (1.0 - w * w).sqrt() + w.asin()) / (2.0 * w);
    std::f64::consts::PI / (2.0 * dim as f64 * mean_root)
}

/// A sampled GOE matrix with the mean spacing at the band centre.
#[derive(Debug, Clone, PartialEq)]
pub struct GoeSample {
    pub matrix: DMatrix<f64>,
    pub mean_spacing: f64,
}

/// Samples a GOE matrix from a seeded generator. `mean_spacing` is the
/// spacing averaged over the central quarter of the band.
pub fn sample_goe(dim: usize, seed: u64) -> Result<GoeSample> {
    if dim < 2 {
        return invalid(format!("GOE dimension must be at least 2, got {dim}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(GoeSample { matrix: sample_goe_matrix(dim, &mut rng), mean_spacing: mean_spacing(dim, 0.25) })
}
