use serde::{Deserialize, Serialize};

use super::trace::ComplexTrace;

/// Starting values for one resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakGuess {
    pub center: f64,
    pub width: f64,
    /// Signed amplitude estimate.
    pub amplitude: f64,
}

/// Finds resonance candidates as local maxima of `|S_ab - delta_ab|` whose
/// topographic prominence is at least `prominence`. For reflection this is
/// the dip of `|S_aa|` below one, for transmission the peak of `|S_ab|`.
/// The width guess is the distance between the crossings of
/// `base + (peak - base)/sqrt(2)`, the half maximum of the squared modulus.
pub fn detect_peaks(trace: &ComplexTrace, prominence: f64) -> Vec<PeakGuess> {
    if trace.len() <= 10 {
        log::warn!("trace with {} samples is too short for peak detection", trace.len());
        return Vec::new();
    }
    let f = trace.frequencies();
    let delta = trace.delta();
    let excess: Vec<f64> = trace.values().iter().map(|v| (v - delta).norm()).collect();
    let n = excess.len();
    let mut guesses = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        // plateaus count once, at their left end
        let mut j = i;
        while j + 1 < n && excess[j + 1] == excess[i] {
            j += 1;
        }
        if excess[i] > excess[i - 1] && j + 1 < n && excess[i] > excess[j + 1] {
            let peak = excess[i];
            let mut left_min = peak;
            let mut k = i;
            while k > 0 && excess[k - 1] <= peak {
                k -= 1;
                left_min = left_min.min(excess[k]);
            }
            let mut right_min = peak;
            let mut k = j;
            while k + 1 < n && excess[k + 1] <= peak {
                k += 1;
                right_min = right_min.min(excess[k]);
            }
            let base = left_min.max(right_min);
            if peak - base >= prominence {
                let level = base + (peak - base) / std::f64::consts::SQRT_2;
                let mut a = i;
                while a > 0 && excess[a] > level {
                    a -= 1;
                }
                let mut b = j;
                while b + 1 < n && excess[b] > level {
                    b += 1;
                }
                let cross = |lo: usize, hi: usize| {
                    let (y0, y1) = (excess[lo], excess[hi]);
                    if y1 == y0 {
                        f[lo]
                    } else {
                        f[lo] + (level - y0) / (y1 - y0) * (f[hi] - f[lo])
                    }
                };
                let left = cross(a, a + 1);
                let right = cross(b - 1, b);
                let width = (right - left).max(f[(i + 1).min(n - 1)] - f[i - 1]);
                let s = trace.values()[i] - delta;
                let sign = if s.re > 0.0 { -1.0 } else { 1.0 };
                guesses.push(PeakGuess { center: f[i], width, amplitude: sign * peak * width / 2.0 });
            }
        }
        i = j + 1;
    }
    guesses
}
