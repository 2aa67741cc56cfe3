use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::geometry::SectorGeometry;
use crate::error::{invalid, Result};

/// Parameters of the smooth level-counting function
/// `N(k) = (A/4 pi) k^2 - (L/4 pi) k + C` of a Dirichlet billiard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylParams {
    pub area: f64,
    pub perimeter: f64,
    pub constant: f64,
}

impl WeylParams {
    pub fn new(area: f64, perimeter: f64, constant: f64) -> Result<Self> {
        if !(area.is_finite() && area > 0.0) {
            return invalid(format!("area must be positive, got {area}"));
        }
        if !(perimeter.is_finite() && perimeter > 0.0) {
            return invalid(format!("perimeter must be positive, got {perimeter}"));
        }
        if !constant.is_finite() {
            return invalid("Weyl constant must be finite");
        }
        Ok(Self { area, perimeter, constant })
    }

    pub fn for_sector(geom: &SectorGeometry, constant: f64) -> Self {
        Self { area: geom.area(), perimeter: geom.perimeter(), constant }
    }

    /// Corner and curvature corrections for the sector: one corner of angle
    /// theta, two right-angle corners and the arc curvature.
    pub fn sector_corner_constant(geom: &SectorGeometry) -> f64 {
        let corner = |a: f64| (PI * PI - a * a) / (24.0 * PI * a);
        corner(geom.theta()) + 2.0 * corner(PI / 2.0) + geom.theta() / (12.0 * PI)
    }

    /// Area and perimeter terms without the constant.
    pub fn smooth_part(&self, k: f64) -> f64 {
        (self.area * k * k - self.perimeter * k) / (4.0 * PI)
    }

    /// Least-squares fit of the constant to the staircase of `values`,
    /// sampled at mid-step (`n - 1/2` at the `n`-th level).
    pub fn fit_constant(area: f64, perimeter: f64, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return invalid("cannot fit the Weyl constant to an empty spectrum");
        }
        let p = Self::new(area, perimeter, 0.0)?;
        let c = values
            .iter()
            .enumerate()
            .map(|(i, &k)| i as f64 + 0.5 - p.smooth_part(k))
            .sum::<f64>()
            / values.len() as f64;
        Ok(Self { constant: c, ..p })
    }

    /// Least-squares fit of all three parameters to the staircase.
    pub fn fit_all(values: &[f64]) -> Result<Self> {
        if values.len() < 3 {
            return invalid("need at least three levels to fit the Weyl law");
        }
        // normal equations for n - 1/2 ~ a k^2 + b k + c
        let mut ata = nalgebra::Matrix3::<f64>::zeros();
        let mut atb = nalgebra::Vector3::<f64>::zeros();
        let scale = values[values.len() - 1];
        for (i, &k) in values.iter().enumerate() {
            let u = k / scale;
            let row = nalgebra::Vector3::new(u * u, u, 1.0);
            ata += row * row.transpose();
            atb += row * (i as f64 + 0.5);
        }
        let sol = ata
            .lu()
            .solve(&atb)
            .ok_or_else(|| crate::Error::Numerical("singular Weyl fit".into()))?;
        let area = 4.0 * PI * sol[0] / (scale * scale);
        let perimeter = -4.0 * PI * sol[1] / scale;
        if !(area > 0.0 && perimeter > 0.0) {
            return invalid(format!(
                "Weyl fit gave unphysical area {area} / perimeter {perimeter}; supply them explicitly"
            ));
        }
        Ok(Self { area, perimeter, constant: sol[2] })
    }
}

/// Smooth counting function `N(k) = (A/4 pi) k^2 - (L/4 pi) k + C`.
pub fn weyl_count(k: f64, params: &WeylParams) -> f64 {
    params.smooth_part(k) + params.constant
}
