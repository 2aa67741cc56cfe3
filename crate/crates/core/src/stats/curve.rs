use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// What a [`StatCurve`] holds; decides how it is interpolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// Normalised histogram; abscissae are bin centres.
    Histogram,
    /// Empirical distribution function: a right-continuous step curve that
    /// jumps at each abscissa to the listed value.
    EmpiricalCdf,
    /// Smooth density sampled on a grid.
    Density,
    /// Smooth cumulative distribution sampled on a grid.
    Cdf,
    NumberVariance,
    Rigidity,
}

impl CurveKind {
    pub fn is_cumulative(self) -> bool {
        matches!(self, Self::EmpiricalCdf | Self::Cdf)
    }
}

/// A sampled statistic with optional histogram occupancies and any quality
/// warnings raised while computing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatCurve {
    pub kind: CurveKind,
    pub abscissa: Vec<f64>,
    pub ordinate: Vec<f64>,
    pub counts: Option<Vec<u64>>,
    pub warnings: Vec<String>,
}

impl StatCurve {
    pub fn new(kind: CurveKind, abscissa: Vec<f64>, ordinate: Vec<f64>) -> Result<Self> {
        if abscissa.len() != ordinate.len() {
            return invalid(format!(
                "abscissa has {} points but ordinate {}",
                abscissa.len(),
                ordinate.len()
            ));
        }
        if abscissa.windows(2).any(|w| !(w[0] <= w[1])) {
            return invalid("curve abscissa must be ascending");
        }
        Ok(Self { kind, abscissa, ordinate, counts: None, warnings: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    /// Value at `x`. Step curves give the right limit and, with `left`, the
    /// left limit; smooth curves interpolate linearly. Outside the sampled
    /// range the end values are held.
    pub fn value_at(&self, x: f64, left: bool) -> f64 {
        if self.is_empty() {
            return f64::NAN;
        }
        match self.kind {
            CurveKind::EmpiricalCdf => {
                let i = if left {
                    self.abscissa.partition_point(|&a| a < x)
                } else {
                    self.abscissa.partition_point(|&a| a <= x)
                };
                if i == 0 {
                    0.0
                } else {
                    self.ordinate[i - 1]
                }
            }
            _ => {
                let i = self.abscissa.partition_point(|&a| a <= x);
                if i == 0 {
                    return self.ordinate[0];
                }
                if i == self.len() {
                    return self.ordinate[i - 1];
                }
                let (x0, x1) = (self.abscissa[i - 1], self.abscissa[i]);
                let (y0, y1) = (self.ordinate[i - 1], self.ordinate[i]);
                if x1 == x0 {
                    return y1;
                }
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }
}
