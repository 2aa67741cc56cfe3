pub mod eigen;
pub mod field;
pub mod fit;
pub mod missing;
pub mod rmt;
pub mod stats;

use std::path::{Path, PathBuf};

use chaoskit::billiard::{DiskScatterer, SectorGeometry, WeylParams};
use clap::Args;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::kv::KvFile;

/// Sector billiard with optional disk scatterers and point-scatterer
/// coupling, as read from a geometry file.
#[derive(Debug, Clone, Serialize)]
pub struct GeometryConfig {
    pub name: Option<String>,
    pub radius_m: f64,
    pub theta_rad: f64,
    /// `(x_mm, y_mm, r_mm)` per disk.
    pub scatterers: Vec<[f64; 3]>,
    pub coupling: Option<f64>,
    #[serde(skip)]
    pub geometry: SectorGeometry,
    #[serde(skip)]
    pub disks: Vec<DiskScatterer>,
}

impl GeometryConfig {
    pub fn read(path: &Path) -> CliResult<Self> {
        Self::from_kv(&KvFile::read(path)?)
    }

    pub fn from_kv(kv: &KvFile) -> CliResult<Self> {
        kv.reject_unknown(&["name", "radius_m", "theta_rad", "scatterer", "coupling"])?;
        let radius_m: f64 = kv.require("radius_m")?;
        let theta_rad: f64 = kv.require("theta_rad")?;
        let geometry = SectorGeometry::new(radius_m, theta_rad)?;
        let mut scatterers = Vec::new();
        for s in kv.lists::<f64>("scatterer")? {
            let [x, y, r] = s[..] else {
                return Err(CliError::Config("scatterer needs three values: x_mm, y_mm, r_mm".into()));
            };
            scatterers.push([x, y, r]);
        }
        let disks: Vec<DiskScatterer> = scatterers.iter().map(|&[x, y, r]| DiskScatterer::from_mm(x, y, r)).collect();
        geometry.validate_disks(&disks)?;
        Ok(Self { name: kv.get("name")?, radius_m, theta_rad, scatterers, coupling: kv.get("coupling")?, geometry, disks })
    }
}

/// How the smooth counting function of a measured or computed spectrum is
/// obtained.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct WeylArgs {
    /// Geometry file supplying area and perimeter.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Billiard area (m^2); overrides the geometry file.
    #[arg(long)]
    pub area: Option<f64>,
    /// Billiard perimeter (m); overrides the geometry file.
    #[arg(long)]
    pub perimeter: Option<f64>,
    /// Fixed Weyl constant instead of the least-squares fit.
    #[arg(long, conflicts_with = "corner_constant")]
    pub weyl_constant: Option<f64>,
    /// Use the sector corner and curvature constant (needs a geometry).
    #[arg(long)]
    pub corner_constant: bool,
}

impl WeylArgs {
    pub fn resolve(&self, values: &[f64]) -> CliResult<WeylParams> {
        let geom = match &self.geometry {
            Some(p) => Some(GeometryConfig::read(p)?.geometry),
            None => None,
        };
        let area = self.area.or(geom.as_ref().map(|g| g.area()));
        let perimeter = self.perimeter.or(geom.as_ref().map(|g| g.perimeter()));
        let constant = if self.corner_constant {
            let g = geom.as_ref().ok_or_else(|| CliError::Config("--corner-constant needs --geometry".into()))?;
            Some(WeylParams::sector_corner_constant(g))
        } else {
            self.weyl_constant
        };
        match (area, perimeter) {
            (Some(a), Some(l)) => Ok(match constant {
                Some(c) => WeylParams::new(a, l, c)?,
                None => WeylParams::fit_constant(a, l, values).map_err(crate::error::as_data)?,
            }),
            (None, None) if constant.is_none() => WeylParams::fit_all(values).map_err(crate::error::as_data),
            _ => Err(CliError::Config(
                "give both area and perimeter (or a geometry) when fixing the Weyl constant".into(),
            )),
        }
    }
}
