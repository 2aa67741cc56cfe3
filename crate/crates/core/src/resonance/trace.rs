use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Complex scattering-matrix samples `S_ab(f)` of one channel pair on an
/// ascending frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexTrace {
    frequencies: Vec<f64>,
    values: Vec<Complex64>,
    pair: (u8, u8),
}

impl ComplexTrace {
    pub fn new(frequencies: Vec<f64>, values: Vec<Complex64>, pair: (u8, u8)) -> Result<Self> {
        if frequencies.len() != values.len() {
            return invalid(format!(
                "{} frequencies but {} samples",
                frequencies.len(),
                values.len()
            ));
        }
        if frequencies.iter().any(|f| !f.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return invalid("trace contains non-finite entries");
        }
        if frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("trace frequencies must be strictly ascending");
        }
        Ok(Self { frequencies, values, pair })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn pair(&self) -> (u8, u8) {
        self.pair
    }

    pub fn is_diagonal(&self) -> bool {
        self.pair.0 == self.pair.1
    }

    /// `delta_ab`: 1 for reflection, 0 for transmission.
    pub fn delta(&self) -> f64 {
        if self.is_diagonal() {
            1.0
        } else {
            0.0
        }
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Samples with `lo <= f < hi`.
    pub fn slice(&self, lo: f64, hi: f64) -> Self {
        let a = self.frequencies.partition_point(|&f| f < lo);
        let b = self.frequencies.partition_point(|&f| f < hi);
        Self {
            frequencies: self.frequencies[a..b].to_vec(),
            values: self.values[a..b].to_vec(),
            pair: self.pair,
        }
    }
}
