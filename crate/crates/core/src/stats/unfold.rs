use serde::{Deserialize, Serialize};

use crate::billiard::{WavevectorSpectrum, WeylParams};
use crate::error::{invalid, Result};

/// A smooth approximation to the level-counting staircase.
pub trait SmoothCounting {
    fn smooth_count(&self, x: f64) -> f64;
}

impl SmoothCounting for WeylParams {
    fn smooth_count(&self, k: f64) -> f64 {
        crate::billiard::weyl_count(k, self)
    }
}

/// Counting function of an already unfolded spectrum.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitDensity;

impl SmoothCounting for UnitDensity {
    fn smooth_count(&self, x: f64) -> f64 {
        x
    }
}

impl<F: Fn(f64) -> f64> SmoothCounting for F {
    fn smooth_count(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Dimensionless levels with unit mean spacing, possibly split into
/// several complete sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnfoldedSpectrum {
    sequences: Vec<Vec<f64>>,
    provenance: String,
}

impl UnfoldedSpectrum {
    pub fn new(sequences: Vec<Vec<f64>>, provenance: impl Into<String>) -> Result<Self> {
        if sequences.is_empty() || sequences.iter().all(|s| s.is_empty()) {
            return invalid("an unfolded spectrum needs at least one level");
        }
        for s in &sequences {
            if s.iter().any(|x| !x.is_finite()) {
                return invalid("unfolded levels must be finite");
            }
            if s.windows(2).any(|w| w[1] < w[0]) {
                return invalid("unfolded levels must be ascending within each sequence");
            }
        }
        Ok(Self { sequences, provenance: provenance.into() })
    }

    pub fn single(levels: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        Self::new(vec![levels], provenance)
    }

    pub fn sequences(&self) -> &[Vec<f64>] {
        &self.sequences
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn level_count(&self) -> usize {
        self.sequences.iter().map(Vec::len).sum()
    }

    /// Nearest-neighbour spacings, taken within each sequence only.
    pub fn spacings(&self) -> Vec<f64> {
        self.sequences
            .iter()
            .flat_map(|s| s.windows(2).map(|w| w[1] - w[0]))
            .collect()
    }

    pub fn mean_spacing(&self) -> f64 {
        let s = self.spacings();
        s.iter().sum::<f64>() / s.len() as f64
    }
}

/// Unfolds `spectrum` with `eps_n = N(k_n)`.
pub fn unfold(spectrum: &WavevectorSpectrum, counting: &impl SmoothCounting) -> Result<UnfoldedSpectrum> {
    unfold_values(spectrum.values(), counting, "unfolded wavevector spectrum")
}

/// Unfolds raw ascending levels.
pub fn unfold_values(
    levels: &[f64],
    counting: &impl SmoothCounting,
    provenance: &str,
) -> Result<UnfoldedSpectrum> {
    if levels.is_empty() {
        return invalid("cannot unfold an empty spectrum");
    }
    let eps: Vec<f64> = levels.iter().map(|&k| counting.smooth_count(k)).collect();
    if eps.windows(2).any(|w| w[1] < w[0]) {
        return invalid("smooth counting function decreases over the spectrum; check its parameters");
    }
    UnfoldedSpectrum::single(eps, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{sector_eigenvalues, SectorGeometry};

    #[test]
    fn picket_fence_by_inverse_construction() {
        let p = WeylParams::new(0.3, 2.0, 0.25).unwrap();
        // invert N(k) = n for k
        let a = p.area / (4.0 * std::f64::consts::PI);
        let b = -p.perimeter / (4.0 * std::f64::consts::PI);
        let k: Vec<f64> = (1..=200)
            .map(|n| {
                let c = p.constant - n as f64;
                (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
            })
            .collect();
        let u = unfold(&WavevectorSpectrum::new(k).unwrap(), &p).unwrap();
        for s in u.spacings() {
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sector_mean_spacing_is_unity() {
        let g = SectorGeometry::new(0.8, std::f64::consts::PI / 3.0).unwrap();
        let spec = sector_eigenvalues(&g, 96.4).unwrap();
        let p = WeylParams::fit_constant(g.area(), g.perimeter(), spec.values()).unwrap();
        let u = unfold(&spec, &p).unwrap();
        assert!((u.mean_spacing() - 1.0).abs() < 0.02, "{}", u.mean_spacing());
    }

    #[test]
    fn constant_shift_leaves_spacings() {
        let spec = WavevectorSpectrum::new(vec![10.0, 11.5, 13.0, 17.0]).unwrap();
        let p = WeylParams::new(0.3, 2.0, 0.0).unwrap();
        let q = WeylParams { constant: 3.5, ..p };
        let a = unfold(&spec, &p).unwrap();
        let b = unfold(&spec, &q).unwrap();
        for (x, y) in a.sequences()[0].iter().zip(&b.sequences()[0]) {
            assert!((y - x - 3.5).abs() < 1e-12);
        }
        for (x, y) in a.spacings().iter().zip(b.spacings()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_is_rejected() {
        assert!(unfold_values(&[], &UnitDensity, "x").is_err());
        assert!(UnfoldedSpectrum::single(vec![2.0, 1.0], "x").is_err());
    }
}
