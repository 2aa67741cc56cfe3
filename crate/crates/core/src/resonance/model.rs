use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::trace::ComplexTrace;
use crate::error::{invalid, Result};

/// One resonance term `-i s A / (f - f_n + i Gamma/2)` of a scattering-matrix
/// element, with `A = sqrt(Gamma_na Gamma_nb)` and the sign `s = +-1` of the
/// product of the partial-width amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub sign: f64,
}

impl Resonance {
    pub fn new(center: f64, width: f64, amplitude: f64) -> Self {
        Self::signed(center, width, amplitude)
    }

    /// From a signed amplitude.
    pub fn signed(center: f64, width: f64, amplitude: f64) -> Self {
        let sign = if amplitude < 0.0 { -1.0 } else { 1.0 };
        Self { center, width, amplitude: amplitude.abs(), sign }
    }

    pub fn signed_amplitude(&self) -> f64 {
        self.sign * self.amplitude
    }

    /// Value of the resonance term at `f`.
    pub fn term(&self, f: f64) -> Complex64 {
        let d = Complex64::new(f - self.center, 0.5 * self.width);
        -Complex64::i() * self.signed_amplitude() / d
    }
}

/// `S_ab(f) = delta_ab - i sum_n A_n / (f - f_n + i Gamma_n/2)` on `frequencies`.
/// The trace is labelled `(1, 1)` when `diagonal`, else `(1, 2)`.
pub fn breit_wigner_model(resonances: &[Resonance], diagonal: bool, frequencies: &[f64]) -> Result<ComplexTrace> {
    if let Some(r) = resonances.iter().find(|r| !(r.width > 0.0 && r.width.is_finite())) {
        return invalid(format!("resonance width must be positive, got {}", r.width));
    }
    let delta = if diagonal { 1.0 } else { 0.0 };
    let values = frequencies
        .iter()
        .map(|&f| resonances.iter().map(|r| r.term(f)).sum::<Complex64>() + delta)
        .collect();
    ComplexTrace::new(frequencies.to_vec(), values, if diagonal { (1, 1) } else { (1, 2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn on_resonance_modulus() {
        let r = Resonance::new(3.0, 0.2, 0.05);
        let t = breit_wigner_model(&[r], false, &[3.0]).unwrap();
        assert!((t.values()[0].norm() - 0.05 / 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_is_delta() {
        let r = Resonance::new(3.0, 0.2, 0.0);
        let g = grid(2.0, 4.0, 50);
        for (diag, d) in [(true, 1.0), (false, 0.0)] {
            let t = breit_wigner_model(&[r], diag, &g).unwrap();
            assert!(t.values().iter().all(|v| *v == Complex64::new(d, 0.0)));
        }
    }

    #[test]
    fn separated_maxima() {
        let rs = [Resonance::new(1.0, 0.01, 0.004), Resonance::new(1.5, 0.02, 0.008)];
        let g = grid(0.8, 1.7, 9001);
        let t = breit_wigner_model(&rs, false, &g).unwrap();
        let m: Vec<f64> = t.values().iter().map(|v| v.norm()).collect();
        let maxima: Vec<f64> = (1..m.len() - 1).filter(|&i| m[i] > m[i - 1] && m[i] >= m[i + 1]).map(|i| g[i]).collect();
        assert_eq!(maxima.len(), 2);
        assert!((maxima[0] - 1.0).abs() <= 1e-4 && (maxima[1] - 1.5).abs() <= 1e-4, "{maxima:?}");
    }

    #[test]
    fn diagonal_passive_resonance_is_subunitary() {
        // Gamma_a < Gamma keeps |S_aa| <= 1
        let r = Resonance::new(0.0, 1.0, 0.3);
        let t = breit_wigner_model(&[r], true, &grid(-5.0, 5.0, 101)).unwrap();
        assert!(t.values().iter().all(|v| v.norm() <= 1.0 + 1e-15));
        assert!(breit_wigner_model(&[Resonance::new(0.0, 0.0, 1.0)], true, &[0.0]).is_err());
    }
}
