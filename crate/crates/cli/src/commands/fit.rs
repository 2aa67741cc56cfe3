use std::path::{Path, PathBuf};

use chaoskit::resonance::{fit_trace, k0_strength_pdf, strengths, FitOptions, FittedResonance, ResonanceSet};
use clap::Args;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{json, read_trace, table};
use crate::manifest::Output;

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Trace files, CSV `frequency_hz,re_Sab,im_Sab`.
    #[arg(long, num_args = 1.., required = true)]
    pub trace: Vec<PathBuf>,
    /// Width of the independently fitted frequency windows.
    #[arg(long, default_value_t = 0.5)]
    pub window_ghz: f64,
    /// Minimum peak prominence in units of |S|.
    #[arg(long, default_value_t = 0.01)]
    pub prominence: f64,
    /// Fit range around each resonance in units of its width.
    #[arg(long, default_value_t = 3.0)]
    pub half_width: f64,
    /// Resonances in the local strength average.
    #[arg(long, default_value_t = chaoskit::resonance::DEFAULT_STRENGTH_NEIGHBORS)]
    pub neighbors: usize,
    /// Bin width of the strength histogram in z = log10(y/<y>).
    #[arg(long, default_value_t = 0.2)]
    pub z_bin: f64,
}

/// One entry of a resonance file.
#[derive(Debug, Clone, Serialize)]
pub struct ResonanceRecord {
    pub f_hz: f64,
    pub gamma_hz: f64,
    /// Signed `sqrt(Gamma_a Gamma_b)`.
    pub amplitude_hz: f64,
    pub converged: bool,
    /// Variances of centre, width and amplitude.
    pub covariance_diag: [f64; 3],
}

impl From<&FittedResonance> for ResonanceRecord {
    fn from(f: &FittedResonance) -> Self {
        Self {
            f_hz: f.resonance.center,
            gamma_hz: f.resonance.width,
            amplitude_hz: f.resonance.signed_amplitude(),
            converged: f.converged,
            covariance_diag: [f.center_error.powi(2), f.width_error.powi(2), f.amplitude_error.powi(2)],
        }
    }
}

#[derive(Serialize)]
struct TraceSummary {
    file: String,
    pair: (u8, u8),
    output: String,
    resonances: usize,
    converged: usize,
    clusters: usize,
}

#[derive(Serialize)]
struct Reciprocity {
    matched: usize,
    unmatched: usize,
    /// Largest `|a_12 - a_21| / max(|a_12|, |a_21|)` over matched pairs.
    max_relative_difference: f64,
    mean_relative_difference: f64,
}

pub fn run(args: &FitArgs, out_dir: &Path) -> CliResult<()> {
    if !(args.window_ghz > 0.0 && args.window_ghz.is_finite()) {
        return Err(CliError::Config(format!("window width must be positive, got {}", args.window_ghz)));
    }
    if !(args.z_bin > 0.0 && args.z_bin.is_finite()) {
        return Err(CliError::Config(format!("z bin width must be positive, got {}", args.z_bin)));
    }
    let options = FitOptions { prominence: args.prominence, half_width: args.half_width, window: args.window_ghz * 1e9 };
    let mut out = Output::new(out_dir, "fit", args)?;
    let mut sets: Vec<ResonanceSet> = Vec::new();
    let mut summaries = Vec::new();
    for (i, path) in args.trace.iter().enumerate() {
        out.input(path)?;
        let trace = read_trace(path)?;
        let set = fit_trace(&trace, &options)?;
        let (a, b) = set.pair;
        let name = format!("resonances_{i}_S{a}{b}.json");
        let records: Vec<ResonanceRecord> = set.resonances.iter().map(ResonanceRecord::from).collect();
        out.write(&name, &json(&records))?;
        summaries.push(TraceSummary {
            file: path.display().to_string(),
            pair: set.pair,
            output: name,
            resonances: records.len(),
            converged: records.iter().filter(|r| r.converged).count(),
            clusters: set.clusters.len(),
        });
        sets.push(set);
    }

    let samples: Vec<(usize, chaoskit::resonance::StrengthSample)> = sets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            let rs: Vec<_> = s.resonances.iter().map(|f| f.resonance).collect();
            strengths(&rs, args.neighbors).into_iter().map(move |x| (i, x))
        })
        .collect();
    out.write(
        "strengths.csv",
        &table(&["trace", "f_hz", "y", "z"], samples.iter().map(|(i, s)| vec![*i as f64, s.center, s.y, s.z])),
    )?;
    out.write("strength_histogram.csv", &strength_histogram(samples.iter().map(|(_, s)| s.z), args.z_bin)?)?;

    let forward = sets.iter().position(|s| s.pair == (1, 2));
    let backward = sets.iter().position(|s| s.pair == (2, 1));
    if let (Some(f), Some(b)) = (forward, backward) {
        out.write("reciprocity.json", &json(&reciprocity(&sets[f], &sets[b])))?;
    }
    out.write("summary.json", &json(&summaries))?;
    out.finish()?;
    Ok(())
}

fn strength_histogram(z: impl Iterator<Item = f64>, bin: f64) -> CliResult<String> {
    let z: Vec<f64> = z.collect();
    if z.is_empty() {
        return Ok(table(&["z", "density", "count", "k0"], std::iter::empty()));
    }
    let lo = (z.iter().copied().fold(f64::INFINITY, f64::min) / bin).floor() * bin;
    let hi = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = (((hi - lo) / bin).floor() as usize) + 1;
    let mut counts = vec![0u64; bins];
    for v in &z {
        counts[(((v - lo) / bin).floor() as usize).min(bins - 1)] += 1;
    }
    let centres: Vec<f64> = (0..bins).map(|i| lo + (i as f64 + 0.5) * bin).collect();
    let pdf = k0_strength_pdf(&centres)?;
    let n = z.len() as f64;
    Ok(table(
        &["z", "density", "count", "k0"],
        (0..bins).map(|i| vec![centres[i], counts[i] as f64 / (n * bin), counts[i] as f64, pdf.ordinate[i]]),
    ))
}

fn reciprocity(a: &ResonanceSet, b: &ResonanceSet) -> Reciprocity {
    let mut diffs = Vec::new();
    let mut unmatched = 0;
    for r in &a.resonances {
        let partner = b
            .resonances
            .iter()
            .min_by(|x, y| {
                (x.resonance.center - r.resonance.center)
                    .abs()
                    .total_cmp(&(y.resonance.center - r.resonance.center).abs())
            })
            .filter(|p| (p.resonance.center - r.resonance.center).abs() < 0.5 * r.resonance.width);
        match partner {
            Some(p) => {
                let (x, y) = (r.resonance.signed_amplitude(), p.resonance.signed_amplitude());
                diffs.push((x - y).abs() / x.abs().max(y.abs()));
            }
            None => unmatched += 1,
        }
    }
    Reciprocity {
        matched: diffs.len(),
        unmatched,
        max_relative_difference: diffs.iter().copied().fold(0.0, f64::max),
        mean_relative_difference: if diffs.is_empty() { 0.0 } else { diffs.iter().sum::<f64>() / diffs.len() as f64 },
    }
}
