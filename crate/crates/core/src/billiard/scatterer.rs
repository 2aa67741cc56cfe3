use super::geometry::SectorGeometry;
use super::sector::{sector_eigenvalues, SectorMode};
use super::spectrum::WavevectorSpectrum;
use crate::error::{invalid, Result};

/// `|psi_n(x, y)|^2` for every mode of a labelled sector spectrum.
pub fn mode_intensities_at(
    geom: &SectorGeometry,
    spectrum: &WavevectorSpectrum,
    x: f64,
    y: f64,
) -> Result<Vec<f64>> {
    let Some(labels) = spectrum.labels() else {
        return invalid("mode intensities need a labelled sector spectrum");
    };
    if !geom.contains(x, y) {
        return invalid(format!("point ({x}, {y}) lies outside the sector"));
    }
    let step = std::f64::consts::PI / geom.theta();
    Ok(spectrum
        .values()
        .iter()
        .zip(labels)
        .map(|(&k, &label)| {
            let mode = SectorMode::from_zero(geom, label, label.m as f64 * step, k * geom.radius());
            mode.intensity_at(x, y)
        })
        .collect())
}

/// Spectrum of a billiard with a point-like scatterer of strength
/// `coupling` at a position where the unperturbed normalised modes have
/// intensities `mode_intensities`.
///
/// The perturbed levels `E = k^2` solve
/// `sum_n w_n [1/(E - E_n) + E_n/(1 + E_n^2)] = 1/coupling`, `w_n = |psi_n|^2`.
/// The left side falls monotonically from `+inf` to `-inf` between
/// consecutive poles, so each gap between modes with `w_n > 0` holds exactly
/// one level; it is located by bisection. Modes with a node at the scatterer
/// (`w_n = 0`) are unaffected and kept as they are. Infinite coupling is
/// allowed and selects the zeros of the sum.
pub fn point_scatterer_spectrum(
    base: &WavevectorSpectrum,
    mode_intensities: &[f64],
    coupling: f64,
    k_max: f64,
) -> Result<WavevectorSpectrum> {
    if coupling == 0.0 || coupling.is_nan() {
        return invalid("coupling must be nonzero; use the unperturbed spectrum instead");
    }
    if !(k_max.is_finite() && k_max > 0.0) {
        return invalid(format!("k_max must be positive, got {k_max}"));
    }
    if mode_intensities.len() != base.len() {
        return invalid(format!(
            "{} intensities for {} base levels",
            mode_intensities.len(),
            base.len()
        ));
    }
    if let Some(w) = mode_intensities.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return invalid(format!("mode intensities must be nonnegative, got {w}"));
    }
    let inverse = 1.0 / coupling;
    let e_max = k_max * k_max;

    let mut poles = Vec::new();
    let mut weights = Vec::new();
    let mut levels = Vec::new();
    for (&k, &w) in base.values().iter().zip(mode_intensities) {
        if w > 0.0 {
            poles.push(k * k);
            weights.push(w);
        } else if k <= k_max {
            levels.push(k);
        }
    }
    let subtraction: Vec<f64> = poles.iter().map(|e| e / (1.0 + e * e)).collect();
    let g = |e: f64| -> f64 {
        poles
            .iter()
            .zip(&weights)
            .zip(&subtraction)
            .map(|((&p, &w), &s)| w * (1.0 / (e - p) + s))
            .sum::<f64>()
            - inverse
    };

    if let Some(&first) = poles.first() {
        if g(0.0) > 0.0 {
            levels.push(bisect_decreasing(&g, 0.0, first).sqrt());
        }
    }
    for pair in poles.windows(2) {
        if pair[0] > e_max {
            break;
        }
        let e = bisect_decreasing(&g, pair[0], pair[1]);
        if e <= e_max {
            levels.push(e.sqrt());
        }
    }
    levels.retain(|&k| k > 0.0 && k <= k_max);
    levels.sort_by(f64::total_cmp);
    WavevectorSpectrum::new(levels)
}

/// Root of a function that decreases from `+inf` to `-inf` on `(lo, hi)`,
/// kept strictly inside the open interval.
fn bisect_decreasing(g: &impl Fn(f64) -> f64, lo0: f64, hi0: f64) -> f64 {
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    root.clamp(lo0.next_up(), hi0.next_down())
}

/// Unperturbed sector spectrum and mode intensities at a scatterer position,
/// truncated at twice the analysis cutoff (four times in `k^2`).
#[derive(Debug, Clone)]
pub struct PointScattererSetup {
    pub base: WavevectorSpectrum,
    pub intensities: Vec<f64>,
    pub k_max: f64,
}

impl PointScattererSetup {
    pub fn new(geom: &SectorGeometry, x: f64, y: f64, k_max: f64) -> Result<Self> {
        Self::with_truncation(geom, x, y, k_max, 2.0 * k_max)
    }

    pub fn with_truncation(
        geom: &SectorGeometry,
        x: f64,
        y: f64,
        k_max: f64,
        k_truncation: f64,
    ) -> Result<Self> {
        if k_truncation < k_max {
            return invalid("truncation must not lie below the analysis cutoff");
        }
        let base = sector_eigenvalues(geom, k_truncation)?;
        let intensities = mode_intensities_at(geom, &base, x, y)?;
        Ok(Self { base, intensities, k_max })
    }

    pub fn spectrum(&self, coupling: f64) -> Result<WavevectorSpectrum> {
        point_scatterer_spectrum(&self.base, &self.intensities, coupling, self.k_max)
    }
}
