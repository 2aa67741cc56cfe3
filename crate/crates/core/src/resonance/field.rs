use crate::billiard::IntensityMap;
use crate::error::{invalid, Result};

/// Electric-field intensity from a map of perturbation-induced frequency
/// shifts, `E^2 = shift / (f0 c1)`, clipped at zero. With `normalize` the
/// map is scaled to a maximum of one.
pub fn field_intensity_from_shift(shift: &IntensityMap, f0: f64, c1: f64, normalize: bool) -> Result<IntensityMap> {
    if c1 == 0.0 || !c1.is_finite() {
        return invalid("perturbation constant c1 must be finite and nonzero");
    }
    if !(f0.is_finite() && f0 > 0.0) {
        return invalid(format!("resonance frequency must be positive, got {f0}"));
    }
    let mut out = shift.map(|df| (df / (f0 * c1)).max(0.0));
    for (v, inside) in out.values.iter_mut().zip(&shift.inside) {
        if !inside {
            *v = 0.0;
        }
    }
    if normalize {
        let max = out.max();
        if max > 0.0 {
            out = out.map(|v| v / max);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{sector_wavefunction, SectorGeometry};

    #[test]
    fn zero_and_linearity() {
        let g = SectorGeometry::sixty_degree();
        let m = sector_wavefunction(&g, 2, 3, 0.02).unwrap();
        let zero = m.map(|_| 0.0);
        assert!(field_intensity_from_shift(&zero, 1e9, 2.0, false).unwrap().values.iter().all(|&v| v == 0.0));
        let a = field_intensity_from_shift(&m, 1e9, 2.0, false).unwrap();
        let b = field_intensity_from_shift(&m.map(|v| 2.0 * v), 1e9, 2.0, false).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((2.0 * x - y).abs() <= 1e-15 * y.abs());
        }
        assert!(field_intensity_from_shift(&m, 1e9, 0.0, false).is_err());
    }

    #[test]
    fn recovers_mode_intensity() {
        let g = SectorGeometry::sixty_degree();
        let mode = sector_wavefunction(&g, 1, 2, 0.01).unwrap();
        let (f0, c1) = (1.7e9, 3.2e-3);
        let shift = mode.map(|e2| 42.0 * f0 * c1 * e2);
        let rec = field_intensity_from_shift(&shift, f0, c1, true).unwrap();
        let scale = mode.max();
        let num: f64 = rec.values.iter().zip(&mode.values).map(|(r, m)| (r - m / scale).powi(2)).sum();
        let den: f64 = mode.values.iter().map(|m| (m / scale).powi(2)).sum();
        assert!((num / den).sqrt() < 1e-12);
    }
}
