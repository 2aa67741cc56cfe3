use serde::{Deserialize, Serialize};

use super::model::Resonance;
use crate::error::Result;
use crate::special::bessel_k0;
use crate::stats::{CurveKind, StatCurve};

/// Number of neighbouring resonances in the local strength average.
pub const DEFAULT_STRENGTH_NEIGHBORS: usize = 10;

/// Strength `y = Gamma_a Gamma_b` of one resonance and its normalised
/// logarithm `z = log10(y / <y>_local)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthSample {
    pub center: f64,
    pub y: f64,
    pub z: f64,
}

/// Strengths of resonances ordered by centre. `<y>_local` is the mean over
/// a block of `neighbors` consecutive resonances centred on each one,
/// shifted inwards at the ends of the list. Resonances with zero amplitude
/// are dropped with a warning.
pub fn strengths(resonances: &[Resonance], neighbors: usize) -> Vec<StrengthSample> {
    let mut kept: Vec<(f64, f64)> = Vec::with_capacity(resonances.len());
    for r in resonances {
        let y = r.amplitude * r.amplitude;
        if y > 0.0 && y.is_finite() {
            kept.push((r.center, y));
        } else {
            log::warn!("dropping resonance at {} with zero strength", r.center);
        }
    }
    kept.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = kept.len();
    let block = neighbors.clamp(1, n.max(1));
    let mut prefix = vec![0.0; n + 1];
    for (i, (_, y)) in kept.iter().enumerate() {
        prefix[i + 1] = prefix[i] + y;
    }
    kept.iter()
        .enumerate()
        .map(|(i, &(center, y))| {
            let start = i.saturating_sub(block / 2).min(n - block);
            let local = (prefix[start + block] - prefix[start]) / block as f64;
            StrengthSample { center, y, z: (y / local).log10() }
        })
        .collect()
}

/// Density of `z = log10 y` for the product of two independent squared
/// Gaussian amplitudes with unit mean,
/// `P(z) = ln(10) sqrt(u) K0(sqrt(u)) / pi`, `u = 10^z`.
pub fn k0_strength_pdf(grid: &[f64]) -> Result<StatCurve> {
    let values = grid
        .iter()
        .map(|&z| {
            let su = 10f64.powf(0.5 * z);
            std::f64::consts::LN_10 * su * bessel_k0(su) / std::f64::consts::PI
        })
        .collect();
    StatCurve::new(CurveKind::Density, grid.to_vec(), values)
}
