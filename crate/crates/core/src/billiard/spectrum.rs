use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Angular and radial quantum numbers `(m, nu)` of a sector mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub m: u32,
    pub nu: u32,
}

/// Strictly ascending eigen-wavevectors (1/m) of a closed billiard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavevectorSpectrum {
    values: Vec<f64>,
    labels: Option<Vec<ModeLabel>>,
}

impl WavevectorSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::check(&values)?;
        Ok(Self { values, labels: None })
    }

    pub fn with_labels(values: Vec<f64>, labels: Vec<ModeLabel>) -> Result<Self> {
        Self::check(&values)?;
        if labels.len() != values.len() {
            return invalid(format!(
                "{} labels for {} wavevectors",
                labels.len(),
                values.len()
            ));
        }
        Ok(Self { values, labels: Some(labels) })
    }

    fn check(values: &[f64]) -> Result<()> {
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return invalid(format!("wavevectors must be positive and finite, got {bad}"));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return invalid(format!(
                "wavevectors must be strictly ascending: entry {} ({}) follows {}",
                i + 1,
                values[i + 1],
                values[i]
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[ModeLabel]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of levels not exceeding `k`.
    pub fn count_below(&self, k: f64) -> usize {
        self.values.partition_point(|&v| v <= k)
    }

    /// Restricts the spectrum to `k <= k_max`.
    pub fn truncated(&self, k_max: f64) -> Self {
        let n = self.count_below(k_max);
        Self {
            values: self.values[..n].to_vec(),
            labels: self.labels.as_ref().map(|l| l[..n].to_vec()),
        }
    }

    /// Index of the level carrying `label`, if any.
    pub fn position_of(&self, label: ModeLabel) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|&l| l == label)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(WavevectorSpectrum::new(vec![1.0, 2.0, 3.0]).is_ok());
        assert!(WavevectorSpectrum::new(vec![1.0, 1.0]).is_err());
        assert!(WavevectorSpectrum::new(vec![2.0, 1.0]).is_err());
        assert!(WavevectorSpectrum::new(vec![0.0, 1.0]).is_err());
        assert!(WavevectorSpectrum::with_labels(vec![1.0], vec![]).is_err());
        assert!(WavevectorSpectrum::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn counting_and_truncation() {
        let s = WavevectorSpectrum::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.count_below(2.0), 2);
        assert_eq!(s.count_below(0.5), 0);
        assert_eq!(s.truncated(3.5).values(), &[1.0, 2.0, 3.0]);
    }
}
