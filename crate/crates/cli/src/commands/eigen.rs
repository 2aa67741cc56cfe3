use std::path::{Path, PathBuf};

use chaoskit::billiard::{sector_eigenvalues, PointScattererSetup, WavevectorSpectrum};
use chaoskit::{frequency_to_wavevector, wavevector_to_frequency};
use clap::Args;
use serde::Serialize;

use super::GeometryConfig;
use crate::error::{CliError, CliResult};
use crate::io::{format_spectrum, table};
use crate::manifest::Output;

#[derive(Debug, Clone, Args, Serialize)]
pub struct EigenArgs {
    /// Geometry file (radius_m, theta_rad, scatterer, coupling).
    #[arg(long)]
    pub geometry: PathBuf,
    /// Upper frequency in GHz; default 4.6 without scatterers, 7 otherwise.
    #[arg(long, conflicts_with = "k_max")]
    pub f_max_ghz: Option<f64>,
    /// Upper wavevector in 1/m.
    #[arg(long)]
    pub k_max: Option<f64>,
    /// Point-scatterer coupling; overrides the geometry file. `inf` selects
    /// the infinitely strong scatterer.
    #[arg(long, allow_hyphen_values = true)]
    pub coupling: Option<f64>,
}

#[derive(Serialize)]
struct Resolved<'a> {
    args: &'a EigenArgs,
    geometry: &'a GeometryConfig,
    k_max: f64,
}

pub fn run(args: &EigenArgs, out_dir: &Path) -> CliResult<()> {
    let geo = GeometryConfig::read(&args.geometry)?;
    let k_max = match (args.k_max, args.f_max_ghz) {
        (Some(k), _) => k,
        (None, Some(f)) => frequency_to_wavevector(f * 1e9),
        (None, None) => frequency_to_wavevector(if geo.disks.is_empty() { 4.6e9 } else { 7.0e9 }),
    };
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(CliError::Config(format!("upper limit must be positive, got k_max = {k_max}")));
    }
    let mut out = Output::new(out_dir, "eigen", &Resolved { args, geometry: &geo, k_max })?;
    out.input(&args.geometry)?;

    let sector = sector_eigenvalues(&geo.geometry, k_max)?;
    if sector.is_empty() {
        log::warn!("no eigenvalues below k_max = {k_max} 1/m");
    }
    let header = vec![
        format!("sector billiard R = {} m, theta = {} rad", geo.radius_m, geo.theta_rad),
        format!("k_max = {k_max} 1/m ({} Hz)", wavevector_to_frequency(k_max)),
        format!("{} levels, wavevector in 1/m", sector.len()),
    ];
    out.write("sector_spectrum.txt", &format_spectrum(&header, sector.values()))?;
    out.write("sector_spectrum.csv", &labelled_table(&sector))?;

    if let Some(coupling) = args.coupling.or(geo.coupling) {
        let [disk] = geo.disks[..] else {
            return Err(CliError::Config(format!(
                "the point-scatterer model needs exactly one scatterer, got {}",
                geo.disks.len()
            )));
        };
        let setup = PointScattererSetup::new(&geo.geometry, disk.x, disk.y, k_max)?;
        let perturbed = setup.spectrum(coupling)?;
        let header = vec![
            format!("point scatterer at ({} m, {} m), coupling {coupling}", disk.x, disk.y),
            format!("k_max = {k_max} 1/m ({} Hz)", wavevector_to_frequency(k_max)),
            format!("{} levels, wavevector in 1/m", perturbed.len()),
        ];
        out.write("scatterer_spectrum.txt", &format_spectrum(&header, perturbed.values()))?;
        out.write(
            "scatterer_spectrum.csv",
            &table(&["k_per_m", "f_hz"], perturbed.values().iter().map(|&k| vec![k, wavevector_to_frequency(k)])),
        )?;
    }
    out.finish()?;
    Ok(())
}

fn labelled_table(s: &WavevectorSpectrum) -> String {
    let labels = s.labels().unwrap_or(&[]);
    table(
        &["m", "nu", "k_per_m", "f_hz"],
        s.values().iter().zip(labels).map(|(&k, l)| vec![l.m as f64, l.nu as f64, k, wavevector_to_frequency(k)]),
    )
}
