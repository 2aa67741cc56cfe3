use std::path::{Path, PathBuf};

use chaoskit::billiard::WeylParams;
use chaoskit::frequency_to_wavevector;
use chaoskit::stats::{
    cumulative_spacing, default_l_grid, dyson_mehta, generate_reference_ensemble, number_variance,
    reference_curve, spacing_distribution, unfold_values, Model, SpacingSummary, StatCurve, Statistic,
    UnfoldedSpectrum, DEFAULT_BIN_WIDTH,
};
use clap::Args;
use serde::Serialize;

use super::WeylArgs;
use crate::error::{as_data, CliError, CliResult};
use crate::io::{json, read_spectrum, table};
use crate::manifest::Output;

/// Fewest levels the statistics are computed for.
pub const MIN_LEVELS: usize = 50;

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsArgs {
    /// Spectrum files (wavevectors, one per line); each is unfolded on its own.
    #[arg(long, num_args = 1.., required_unless_present = "generate")]
    pub spectrum: Vec<PathBuf>,
    /// Treat the spectrum files as already unfolded.
    #[arg(long)]
    pub unfolded: bool,
    /// Analyse generated reference sequences instead (poisson, goe, semi-poisson).
    #[arg(long, conflicts_with = "spectrum")]
    pub generate: Option<Model>,
    /// Levels per generated sequence.
    #[arg(long, default_value_t = 1000)]
    pub levels: usize,
    /// Number of generated sequences.
    #[arg(long, default_value_t = 1)]
    pub sequences: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Lower end of the analysed band in GHz.
    #[arg(long)]
    pub f_min_ghz: Option<f64>,
    /// Upper end of the analysed band in GHz.
    #[arg(long)]
    pub f_max_ghz: Option<f64>,
    /// Histogram bin width on the unfolded scale.
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    pub bin_width: f64,
    #[command(flatten)]
    pub weyl: WeylArgs,
}

#[derive(Serialize)]
struct Summary {
    source: String,
    sequences: usize,
    levels: usize,
    weyl: Vec<WeylParams>,
    spacing: SpacingSummary,
    closest: Model,
    warnings: Vec<String>,
}

pub fn run(args: &StatsArgs, out_dir: &Path) -> CliResult<()> {
    let mut out = Output::new(out_dir, "stats", args)?;
    let mut weyl = Vec::new();
    let u = match args.generate {
        Some(model) => generate_reference_ensemble(model, args.levels, args.sequences, args.seed)?,
        None => {
            let lo = args.f_min_ghz.map(|f| frequency_to_wavevector(f * 1e9)).unwrap_or(f64::NEG_INFINITY);
            let hi = args.f_max_ghz.map(|f| frequency_to_wavevector(f * 1e9)).unwrap_or(f64::INFINITY);
            let mut sequences = Vec::new();
            for path in &args.spectrum {
                out.input(path)?;
                let values = read_spectrum(path)?;
                let levels = if args.unfolded {
                    values.into_iter().filter(|k| *k >= lo && *k <= hi).collect()
                } else {
                    let w = args.weyl.resolve(&values)?;
                    let u = unfold_values(&values, &w, &path.display().to_string()).map_err(as_data)?;
                    weyl.push(w);
                    values
                        .iter()
                        .zip(u.sequences().iter().flatten())
                        .filter(|(k, _)| **k >= lo && **k <= hi)
                        .map(|(_, e)| *e)
                        .collect()
                };
                sequences.push(levels);
            }
            let provenance = args.spectrum.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", ");
            UnfoldedSpectrum::new(sequences, provenance).map_err(as_data)?
        }
    };
    if u.level_count() < MIN_LEVELS {
        return Err(CliError::Data(format!(
            "{} levels in the analysed band, at least {MIN_LEVELS} are needed",
            u.level_count()
        )));
    }

    let mut warnings = Vec::new();
    let hist = spacing_distribution(&u, args.bin_width)?;
    out.write("spacing_distribution.csv", &with_references(&hist, Statistic::P, &["s", "p"], true)?)?;
    let cdf = cumulative_spacing(&u)?;
    out.write("cumulative_spacing.csv", &with_references(&cdf, Statistic::I, &["s", "i"], false)?)?;

    let span = u
        .sequences()
        .iter()
        .map(|s| s.last().copied().unwrap_or(0.0) - s.first().copied().unwrap_or(0.0))
        .fold(0.0, f64::max);
    let grid: Vec<f64> = default_l_grid().into_iter().filter(|&l| 2.0 * l <= span).collect();
    if grid.is_empty() {
        warnings.push("sequences too short for long-range statistics".to_string());
    } else {
        let s2 = number_variance(&u, &grid)?;
        warnings.extend(s2.warnings.iter().cloned());
        out.write("number_variance.csv", &with_references(&s2, Statistic::Sigma2, &["l", "sigma2"], false)?)?;
        let d3 = dyson_mehta(&u, &grid)?;
        warnings.extend(d3.warnings.iter().cloned());
        out.write("rigidity.csv", &with_references(&d3, Statistic::Delta3, &["l", "delta3"], false)?)?;
    }
    warnings.extend(hist.warnings.iter().cloned());
    warnings.dedup();

    let spacing = SpacingSummary::new(&u)?;
    let summary = Summary {
        source: u.provenance().to_string(),
        sequences: u.sequences().len(),
        levels: u.level_count(),
        weyl,
        closest: spacing.closest(),
        spacing,
        warnings,
    };
    out.write("summary.json", &json(&summary))?;
    out.finish()?;
    Ok(())
}

fn with_references(curve: &StatCurve, statistic: Statistic, names: &[&str; 2], counts: bool) -> CliResult<String> {
    let refs = Model::ALL
        .iter()
        .map(|&m| reference_curve(m, statistic, &curve.abscissa))
        .collect::<chaoskit::Result<Vec<_>>>()?;
    let mut header = names.to_vec();
    if counts {
        header.push("count");
    }
    let ref_names: Vec<String> = Model::ALL.iter().map(|m| m.name().replace('-', "_")).collect();
    header.extend(ref_names.iter().map(String::as_str));
    let rows = (0..curve.len()).map(|i| {
        let mut row = vec![curve.abscissa[i], curve.ordinate[i]];
        if counts {
            row.push(curve.counts.as_ref().map_or(0.0, |c| c[i] as f64));
        }
        row.extend(refs.iter().map(|r| r.ordinate[i]));
        row
    });
    Ok(table(&header, rows))
}
