use std::path::{Path, PathBuf};

use chaoskit::billiard::{sector_wavefunction, IntensityMap, SectorGeometry};
use chaoskit::resonance::field_intensity_from_shift;
use clap::Args;
use serde::Serialize;

use super::GeometryConfig;
use crate::error::{CliError, CliResult};
use crate::io::table;
use crate::manifest::Output;

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    /// Measured frequency shifts, CSV `x_m,y_m,shift_hz` on a square grid.
    #[arg(long, required_unless_present = "mode", requires_all = ["f0_ghz", "c1"])]
    pub shift: Option<PathBuf>,
    /// Resonance frequency of the mode in GHz.
    #[arg(long)]
    pub f0_ghz: Option<f64>,
    /// Perturbation-body constant.
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    /// Scale the intensity to a maximum of one.
    #[arg(long)]
    pub normalize: bool,
    /// Exact sector mode `m,nu` to sample instead of converting shifts.
    #[arg(long, conflicts_with = "shift", value_delimiter = ',')]
    pub mode: Option<Vec<u32>>,
    /// Geometry for `--mode`; defaults to the 60 degree, 0.8 m sector.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Grid spacing for `--mode` in mm.
    #[arg(long, default_value_t = 5.0)]
    pub spacing_mm: f64,
}

pub fn run(args: &FieldArgs, out_dir: &Path) -> CliResult<()> {
    let mut out = Output::new(out_dir, "field", args)?;
    let map = match (&args.shift, &args.mode) {
        (Some(path), _) => {
            out.input(path)?;
            let shift = read_shift_map(path)?;
            let f0 = args.f0_ghz.expect("required by the parser") * 1e9;
            field_intensity_from_shift(&shift, f0, args.c1.expect("required by the parser"), args.normalize)?
        }
        (None, Some(mode)) => {
            let &[m, nu] = &mode[..] else {
                return Err(CliError::Config(format!("--mode takes `m,nu`, got {} values", mode.len())));
            };
            let geom = match &args.geometry {
                Some(p) => {
                    out.input(p)?;
                    GeometryConfig::read(p)?.geometry
                }
                None => SectorGeometry::sixty_degree(),
            };
            let map = sector_wavefunction(&geom, m, nu, args.spacing_mm * 1e-3)?;
            if args.normalize && map.max() > 0.0 {
                let m = map.max();
                map.map(|v| v / m)
            } else {
                map
            }
        }
        (None, None) => return Err(CliError::Config("give --shift or --mode".into())),
    };
    out.write("intensity.csv", &map_table(&map))?;
    out.finish()?;
    Ok(())
}

fn map_table(map: &IntensityMap) -> String {
    let rows = (0..map.ny)
        .flat_map(|iy| (0..map.nx).map(move |ix| (ix, iy)))
        .filter(|&(ix, iy)| map.is_inside(ix, iy))
        .map(|(ix, iy)| vec![map.x(ix), map.y(iy), map.get(ix, iy)]);
    table(&["x_m", "y_m", "intensity"], rows)
}

/// Reads scattered grid points into a map; grid nodes absent from the file
/// count as outside the domain.
fn read_shift_map(path: &Path) -> CliResult<IntensityMap> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {name}: {e}")))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("x_m") {
            continue;
        }
        let p: Option<Vec<f64>> = line.split(',').map(|f| f.trim().parse().ok()).collect();
        match p {
            Some(p) if p.len() == 3 => points.push((p[0], p[1], p[2])),
            _ => return Err(CliError::Data(format!("{name}:{}: expected `x_m,y_m,shift_hz`, got `{line}`", i + 1))),
        }
    }
    if points.len() < 2 {
        return Err(CliError::Data(format!("{name}: need at least two grid points")));
    }
    let axis = |sel: fn(&(f64, f64, f64)) -> f64| {
        let mut v: Vec<f64> = points.iter().map(sel).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let xs = axis(|p| p.0);
    let ys = axis(|p| p.1);
    let spacing = xs
        .windows(2)
        .chain(ys.windows(2))
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let (x0, y0) = (xs[0], ys[0]);
    let index = |v: f64, origin: f64| ((v - origin) / spacing).round();
    let nx = index(xs[xs.len() - 1], x0) as usize + 1;
    let ny = index(ys[ys.len() - 1], y0) as usize + 1;
    let mut values = vec![0.0; nx * ny];
    let mut inside = vec![false; nx * ny];
    for &(x, y, s) in &points {
        let (fx, fy) = (index(x, x0), index(y, y0));
        if (x - x0 - fx * spacing).abs() > 1e-6 * spacing || (y - y0 - fy * spacing).abs() > 1e-6 * spacing {
            return Err(CliError::Data(format!("{name}: point ({x}, {y}) is off the regular grid")));
        }
        let k = fy as usize * nx + fx as usize;
        values[k] = s;
        inside[k] = true;
    }
    Ok(IntensityMap { nx, ny, x0, y0, spacing, values, inside })
}
