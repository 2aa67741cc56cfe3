use std::path::{Path, PathBuf};

use chaoskit::billiard::WeylParams;
use chaoskit::stats::{missing_level_scan, MissingLevel};
use clap::Args;
use serde::Serialize;

use super::WeylArgs;
use crate::error::{CliError, CliResult};
use crate::io::{json, read_spectrum};
use crate::manifest::Output;

#[derive(Debug, Clone, Args, Serialize)]
pub struct MissingArgs {
    /// Spectrum file (wavevectors, one per line).
    #[arg(long)]
    pub spectrum: PathBuf,
    /// Levels averaged on each side of a gap.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[command(flatten)]
    pub weyl: WeylArgs,
}

#[derive(Serialize)]
struct Report {
    levels: usize,
    window: usize,
    weyl: WeylParams,
    missing: Vec<MissingLevel>,
}

pub fn run(args: &MissingArgs, out_dir: &Path) -> CliResult<()> {
    if args.window == 0 {
        return Err(CliError::Config("window must be at least one level".into()));
    }
    let mut out = Output::new(out_dir, "missing", args)?;
    out.input(&args.spectrum)?;
    let values = read_spectrum(&args.spectrum)?;
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Data(format!("{}: levels must be ascending", args.spectrum.display())));
    }
    let weyl = args.weyl.resolve(&values)?;
    let missing = missing_level_scan(&values, &weyl, args.window)?;
    out.write("missing.json", &json(&Report { levels: values.len(), window: args.window, weyl, missing }))?;
    out.finish()?;
    Ok(())
}
