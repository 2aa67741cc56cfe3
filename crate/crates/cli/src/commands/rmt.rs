use std::path::{Path, PathBuf};

use chaoskit::rmt::{coupling_for_transmission, ensemble_run, mean_spacing, RmtEnsembleConfig};
use clap::Args;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{json, table};
use crate::kv::KvFile;
use crate::manifest::Output;

#[derive(Debug, Clone, Args, Serialize)]
pub struct RmtArgs {
    /// Key-value ensemble configuration.
    #[arg(long)]
    pub config: PathBuf,
}

const KEYS: &[&str] = &[
    "dimension",
    "transmission_a",
    "transmission_b",
    "coupling_a",
    "coupling_b",
    "fictitious_channels",
    "tau_abs",
    "fictitious_transmission",
    "realizations",
    "seed",
    "band",
    "step",
    "max_lag",
    "correlation_window",
];

/// Builds an ensemble configuration from a key-value file. Antenna
/// couplings are given either directly or as transmissions; absorption
/// either as `tau_abs` or as the per-channel transmission.
pub fn parse_config(kv: &KvFile) -> CliResult<(RmtEnsembleConfig, Targets)> {
    kv.reject_unknown(KEYS)?;
    let mut c = RmtEnsembleConfig::default();
    if let Some(v) = kv.get("dimension")? {
        c.dimension = v;
    }
    if let Some(v) = kv.get("band")? {
        c.band = v;
    }
    let d = mean_spacing(c.dimension, c.band);
    let targets = Targets { transmission_a: kv.get("transmission_a")?, transmission_b: kv.get("transmission_b")? };
    c.coupling_a = antenna(kv, "coupling_a", targets.transmission_a, d)?;
    c.coupling_b = antenna(kv, "coupling_b", targets.transmission_b, d)?;
    if let Some(v) = kv.get("fictitious_channels")? {
        c.fictitious_channels = v;
    }
    c.fictitious_transmission = match (kv.get::<f64>("tau_abs")?, kv.get::<f64>("fictitious_transmission")?) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either tau_abs or fictitious_transmission".into())),
        (Some(tau), None) if c.fictitious_channels == 0 => {
            if tau != 0.0 {
                return Err(CliError::Config("absorption needs at least one fictitious channel".into()));
            }
            0.0
        }
        (Some(tau), None) => tau / c.fictitious_channels as f64,
        (None, Some(t)) => t,
        (None, None) => 0.0,
    };
    if let Some(v) = kv.get("realizations")? {
        c.realizations = v;
    }
    if let Some(v) = kv.get("seed")? {
        c.seed = v;
    }
    if let Some(v) = kv.get("step")? {
        c.step = v;
    }
    if let Some(v) = kv.get("max_lag")? {
        c.max_lag = v;
    }
    c.correlation_window = kv.get("correlation_window")?;
    c.validate()?;
    Ok((c, targets))
}

fn antenna(kv: &KvFile, key: &str, transmission: Option<f64>, d: f64) -> CliResult<f64> {
    match (kv.get::<f64>(key)?, transmission) {
        (Some(_), Some(_)) => Err(CliError::Config(format!("give either {key} or the matching transmission"))),
        (Some(v), None) => Ok(v),
        (None, Some(t)) => Ok(coupling_for_transmission(t, d)?),
        (None, None) => Err(CliError::Config(format!("missing {key} or the matching transmission"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Targets {
    pub transmission_a: Option<f64>,
    pub transmission_b: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    label: &'static str,
    dimension: usize,
    realizations: usize,
    mean_spacing: f64,
    tau_abs: f64,
    targets: Targets,
    expected_transmission_a: f64,
    expected_transmission_b: f64,
    transmission_a: f64,
    transmission_b: f64,
    transmission_a_error: Option<f64>,
    transmission_b_error: Option<f64>,
    correlation_width: Option<f64>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct Resolved<'a> {
    args: &'a RmtArgs,
    ensemble: &'a RmtEnsembleConfig,
}

pub fn run(args: &RmtArgs, out_dir: &Path) -> CliResult<()> {
    let (config, targets) = parse_config(&KvFile::read(&args.config)?)?;
    let mut out = Output::new(out_dir, "rmt", &Resolved { args, ensemble: &config })?;
    out.input(&args.config)?;
    let stats = ensemble_run(&config)?;
    let label = if stats.unitary { "unitary" } else { "absorbing" };
    let c = &stats.autocorrelation;
    out.write(
        &format!("autocorrelation_{label}.csv"),
        &table(&["epsilon", "abs_c"], (0..c.len()).map(|i| vec![c.abscissa[i], c.ordinate[i]])),
    )?;
    for d in &stats.distributions {
        let (a, b) = d.pair;
        out.write(
            &format!("modulus_S{a}{b}_{label}.csv"),
            &table(&["abs_s", "density"], (0..d.modulus.len()).map(|i| vec![d.modulus.abscissa[i], d.modulus.ordinate[i]])),
        )?;
        out.write(
            &format!("phase_S{a}{b}_{label}.csv"),
            &table(&["phase", "density"], (0..d.phase.len()).map(|i| vec![d.phase.abscissa[i], d.phase.ordinate[i]])),
        )?;
    }
    let summary = Summary {
        label,
        dimension: stats.dimension,
        realizations: stats.realizations,
        mean_spacing: stats.mean_spacing,
        tau_abs: stats.tau_abs,
        targets,
        expected_transmission_a: stats.expected_transmission_a,
        expected_transmission_b: stats.expected_transmission_b,
        transmission_a: stats.transmission_a,
        transmission_b: stats.transmission_b,
        transmission_a_error: stats.transmission_a_error,
        transmission_b_error: stats.transmission_b_error,
        correlation_width: stats.correlation_width,
        warnings: stats.warnings.clone(),
    };
    out.write("summary.json", &json(&summary))?;
    out.write("distributions.json", &json(&stats.distributions))?;
    out.finish()?;
    Ok(())
}
