use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A circle sector `0 <= r < R`, `0 < phi < theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorGeometry {
    radius: f64,
    theta: f64,
}

impl SectorGeometry {
    pub fn new(radius: f64, theta: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return invalid(format!("sector radius must be positive, got {radius}"));
        }
        if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
            return invalid(format!("opening angle must lie in (0, 2 pi), got {theta}"));
        }
        Ok(Self { radius, theta })
    }

    /// The 60 degree, 0.8 m sector used throughout the microwave experiments.
    pub fn sixty_degree() -> Self {
        Self { radius: 0.8, theta: std::f64::consts::FRAC_PI_3 }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn area(&self) -> f64 {
        0.5 * self.theta * self.radius * self.radius
    }

    pub fn perimeter(&self) -> f64 {
        self.radius * (2.0 + self.theta)
    }

    /// Polar angle of `(x, y)` mapped into `[0, 2 pi)`.
    pub(crate) fn polar(x: f64, y: f64) -> (f64, f64) {
        let r = x.hypot(y);
        let mut phi = y.atan2(x);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        (r, phi)
    }

    /// Whether `(x, y)` lies in the closed sector.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (r, phi) = Self::polar(x, y);
        r <= self.radius && (r == 0.0 || phi <= self.theta)
    }

    /// Distance from an interior point to the sector boundary.
    pub fn distance_to_boundary(&self, x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        let to_arc = self.radius - r;
        let to_edge = |angle: f64| {
            // distance to the segment from the origin along `angle`
            let (ux, uy) = (angle.cos(), angle.sin());
            let t = (x * ux + y * uy).clamp(0.0, self.radius);
            (x - t * ux).hypot(y - t * uy)
        };
        to_arc.min(to_edge(0.0)).min(to_edge(self.theta))
    }

    /// Checks that every disk lies strictly inside the sector and that no two
    /// disks overlap.
    pub fn validate_disks(&self, disks: &[DiskScatterer]) -> Result<()> {
        for (i, d) in disks.iter().enumerate() {
            if !(d.radius.is_finite() && d.radius > 0.0) {
                return invalid(format!("scatterer {i}: radius must be positive, got {}", d.radius));
            }
            if !self.contains(d.x, d.y) || self.distance_to_boundary(d.x, d.y) <= d.radius {
                return invalid(format!(
                    "scatterer {i} at ({}, {}) with radius {} does not lie strictly inside the sector",
                    d.x, d.y, d.radius
                ));
            }
            for (j, e) in disks.iter().enumerate().skip(i + 1) {
                if (d.x - e.x).hypot(d.y - e.y) <= d.radius + e.radius {
                    return invalid(format!("scatterers {i} and {j} overlap"));
                }
            }
        }
        Ok(())
    }
}

/// A circular scatterer; all lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskScatterer {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

impl DiskScatterer {
    pub fn new(x: f64, y: f64, radius: f64) -> Self {
        Self { x, y, radius }
    }

    /// Builds a disk from millimetre coordinates.
    pub fn from_mm(x_mm: f64, y_mm: f64, r_mm: f64) -> Self {
        Self { x: x_mm * 1e-3, y: y_mm * 1e-3, radius: r_mm * 1e-3 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_geometry() {
        assert!(SectorGeometry::new(0.0, 1.0).is_err());
        assert!(SectorGeometry::new(1.0, 0.0).is_err());
        assert!(SectorGeometry::new(1.0, 2.0 * PI).is_err());
        assert!(SectorGeometry::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn area_and_perimeter() {
        let g = SectorGeometry::sixty_degree();
        assert!((g.area() - 0.335_103_216_382_911_2).abs() < 1e-15);
        assert!((g.perimeter() - 2.437_758_040_957_278).abs() < 1e-14);
    }

    #[test]
    fn disk_validation() {
        let g = SectorGeometry::sixty_degree();
        let ok = DiskScatterer::from_mm(640.0, 400.0, 24.0);
        g.validate_disks(&[ok]).unwrap();
        let outside = DiskScatterer::from_mm(790.0, 10.0, 20.0);
        assert!(g.validate_disks(&[outside]).is_err());
        let a = DiskScatterer::from_mm(640.0, 400.0, 30.0);
        let b = DiskScatterer::from_mm(660.0, 420.0, 30.0);
        assert!(g.validate_disks(&[a, b]).is_err());
    }
}
