use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::SectorGeometry;
use super::spectrum::{ModeLabel, WavevectorSpectrum};
use crate::error::{invalid, Error, Result};
use crate::special::{bessel_j, bessel_j_with_derivative, bessel_order_zeros, bessel_zeros_below, sin_pi};

/// All Dirichlet eigen-wavevectors `k <= k_max` of the sector, labelled by
/// `(m, nu)`.
///
/// The mode `(m, nu)` satisfies `J_{m pi/theta}(k R) = 0` with `k R` the
/// `nu`-th zero. Angular indices run until the order `m pi / theta` itself
/// exceeds `k_max R`, beyond which no zero can lie below the cutoff.
pub fn sector_eigenvalues(geom: &SectorGeometry, k_max: f64) -> Result<WavevectorSpectrum> {
    if !(k_max.is_finite() && k_max > 0.0) {
        return invalid(format!("k_max must be positive, got {k_max}"));
    }
    let x_max = k_max * geom.radius();
    let step = std::f64::consts::PI / geom.theta();
    let m_max = (x_max / step).floor() as u32;
    let per_order: Vec<Vec<(f64, ModeLabel)>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let zeros = bessel_zeros_below(m as f64 * step, x_max)?;
            Ok(zeros
                .into_iter()
                .enumerate()
                .map(|(i, z)| (z / geom.radius(), ModeLabel { m, nu: i as u32 + 1 }))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut levels: Vec<(f64, ModeLabel)> = per_order.into_iter().flatten().collect();
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (values, labels): (Vec<f64>, Vec<ModeLabel>) = levels.into_iter().unzip();
    WavevectorSpectrum::with_labels(values, labels)
        .map_err(|e| Error::Numerical(format!("sector spectrum is degenerate: {e}")))
}

/// A normalised sector eigenmode
/// `psi(r, phi) = N sin(m pi phi / theta) J_{m pi/theta}(k r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorMode {
    geom: SectorGeometry,
    label: ModeLabel,
    order: f64,
    k: f64,
    norm: f64,
}

impl SectorMode {
    pub fn new(geom: &SectorGeometry, label: ModeLabel) -> Result<Self> {
        if label.m == 0 || label.nu == 0 {
            return Err(Error::NotFound(format!(
                "sector mode ({}, {}) does not exist; both indices start at 1",
                label.m, label.nu
            )));
        }
        let order = label.m as f64 * std::f64::consts::PI / geom.theta();
        let zero = *bessel_order_zeros(order, label.nu as usize)?
            .last()
            .expect("at least one zero requested");
        Ok(Self::from_zero(geom, label, order, zero))
    }

    pub(crate) fn from_zero(geom: &SectorGeometry, label: ModeLabel, order: f64, zero: f64) -> Self {
        let (_, dj) = bessel_j_with_derivative(order, zero);
        // int |psi|^2 = N^2 (theta/2) (R^2/2) J'(kR)^2 = 1
        let norm = 2.0 / (geom.radius() * dj.abs() * geom.theta().sqrt());
        Self { geom: *geom, label, order, k: zero / geom.radius(), norm }
    }

    pub fn label(&self) -> ModeLabel {
        self.label
    }

    pub fn wavevector(&self) -> f64 {
        self.k
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// Mode amplitude at polar coordinates; zero outside the sector.
    pub fn value(&self, r: f64, phi: f64) -> f64 {
        if r > self.geom.radius() || phi < 0.0 || phi > self.geom.theta() {
            return 0.0;
        }
        let angular = if phi == self.geom.theta() {
            0.0
        } else {
            sin_pi(self.label.m as f64 * phi / self.geom.theta())
        };
        if angular == 0.0 {
            return 0.0;
        }
        self.norm * angular * bessel_j(self.order, self.k * r)
    }

    /// Mode amplitude at Cartesian coordinates (m).
    pub fn value_at(&self, x: f64, y: f64) -> f64 {
        let (r, phi) = SectorGeometry::polar(x, y);
        self.value(r, phi)
    }

    pub fn intensity_at(&self, x: f64, y: f64) -> f64 {
        self.value_at(x, y).powi(2)
    }
}

/// A scalar field sampled on a regular Cartesian grid, with a mask of the
/// points that lie inside the domain. Values are stored row by row
/// (`index = iy * nx + ix`); masked-out points hold zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityMap {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub spacing: f64,
    pub values: Vec<f64>,
    pub inside: Vec<bool>,
}

impl IntensityMap {
    pub fn x(&self, ix: usize) -> f64 {
        self.x0 + ix as f64 * self.spacing
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y0 + iy as f64 * self.spacing
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn is_inside(&self, ix: usize, iy: usize) -> bool {
        self.inside[iy * self.nx + ix]
    }

    /// Maps every value, keeping grid and mask.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Samples `|psi_{m,nu}|^2` on a square grid covering the sector.
pub fn sector_wavefunction(geom: &SectorGeometry, m: u32, nu: u32, spacing: f64) -> Result<IntensityMap> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return invalid(format!("grid spacing must be positive, got {spacing}"));
    }
    let mode = SectorMode::new(geom, ModeLabel { m, nu })?;
    let r = geom.radius();
    let theta = geom.theta();
    let mut corners = vec![(0.0, 0.0), (r, 0.0), (r * theta.cos(), r * theta.sin())];
    for quarter in 1..4 {
        let a = quarter as f64 * std::f64::consts::FRAC_PI_2;
        if a < theta {
            corners.push((r * a.cos(), r * a.sin()));
        }
    }
    let x_min = corners.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let x_max = corners.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let y_min = corners.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let y_max = corners.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let nx = ((x_max - x_min) / spacing).floor() as usize + 1;
    let ny = ((y_max - y_min) / spacing).floor() as usize + 1;
    let mut values = vec![0.0; nx * ny];
    let mut inside = vec![false; nx * ny];
    for iy in 0..ny {
        let y = y_min + iy as f64 * spacing;
        for ix in 0..nx {
            let x = x_min + ix as f64 * spacing;
            if geom.contains(x, y) {
                inside[iy * nx + ix] = true;
                values[iy * nx + ix] = mode.intensity_at(x, y);
            }
        }
    }
    Ok(IntensityMap { nx, ny, x0: x_min, y0: y_min, spacing, values, inside })
}
