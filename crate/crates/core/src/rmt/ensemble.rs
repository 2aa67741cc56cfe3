use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RmtEnsembleConfig;
use super::observables::{autocorrelation, correlation_width, element_distributions, pooled_mean};
use super::smatrix::Realization;
use crate::error::Result;
use crate::resonance::ComplexTrace;
use crate::stats::StatCurve;

const HISTOGRAM_BINS: usize = 50;

/// Modulus and phase histograms of one scattering-matrix element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistributions {
    pub pair: (u8, u8),
    pub mean: Complex64,
    pub mean_modulus: f64,
    pub modulus: StatCurve,
    pub phase: StatCurve,
}

/// Aggregated observables of an ensemble run. Frequencies are in units of
/// the mean spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub dimension: usize,
    pub realizations: usize,
    pub mean_spacing: f64,
    pub tau_abs: f64,
    pub unitary: bool,
    pub transmission_a: f64,
    pub transmission_b: f64,
    /// Standard errors of the transmission estimates; absent for a single
    /// realisation.
    pub transmission_a_error: Option<f64>,
    pub transmission_b_error: Option<f64>,
    pub expected_transmission_a: f64,
    pub expected_transmission_b: f64,
    /// Autocorrelation modulus of `S_12`.
    pub autocorrelation: StatCurve,
    pub correlation_width: Option<f64>,
    pub distributions: Vec<PairDistributions>,
    pub warnings: Vec<String>,
}

/// `1 - |<S>|^2` over all samples with a delta-method standard error
/// from the spread of the per-realisation means.
fn transmission_with_error(traces: &[&ComplexTrace]) -> (f64, Option<f64>) {
    let owned: Vec<ComplexTrace> = traces.iter().map(|t| (*t).clone()).collect();
    let mean = pooled_mean(&owned);
    let t = 1.0 - mean.norm_sqr();
    let r = traces.len();
    if r < 2 || mean.norm() == 0.0 {
        return (t, None);
    }
    let dir = mean / mean.norm();
    let proj: Vec<f64> = owned.iter().map(|tr| (pooled_mean(std::slice::from_ref(tr)) * dir.conj()).re).collect();
    let m = proj.iter().sum::<f64>() / r as f64;
    let var = proj.iter().map(|p| (p - m).powi(2)).sum::<f64>() / (r - 1) as f64;
    (t, Some(2.0 * mean.norm() * (var / r as f64).sqrt()))
}

/// Runs all realisations of `config` in parallel and aggregates the
/// transmission coefficients, the `S_12` autocorrelation and the element
/// distributions. The result depends only on the configuration.
pub fn ensemble_run(config: &RmtEnsembleConfig) -> Result<EnsembleStats> {
    config.validate()?;
    let grid = config.energy_grid();
    let per_realization: Vec<Vec<ComplexTrace>> = (0..config.realizations)
        .into_par_iter()
        .map(|i| Realization::new(config, i)?.traces(&grid))
        .collect::<Result<_>>()?;
    let select = |k: usize| -> Vec<&ComplexTrace> { per_realization.iter().map(|ts| &ts[k]).collect() };
    let owned = |k: usize| -> Vec<ComplexTrace> { select(k).into_iter().cloned().collect() };

    let mut warnings = Vec::new();
    if config.realizations < 10 {
        warnings.push(format!("{} realisations; transmission estimates are rough", config.realizations));
    }
    let (transmission_a, transmission_a_error) = transmission_with_error(&select(0));
    let (transmission_b, transmission_b_error) = transmission_with_error(&select(3));
    let s12 = owned(1);
    let autocorrelation = autocorrelation(&s12, config.max_lag, config.correlation_window)?;
    warnings.extend(autocorrelation.warnings.iter().cloned());
    let correlation_width = correlation_width(&autocorrelation);

    let mut distributions = Vec::new();
    for k in 0..4 {
        let traces = owned(k);
        let (modulus, phase) = element_distributions(&traces, HISTOGRAM_BINS)?;
        let n: usize = traces.iter().map(ComplexTrace::len).sum();
        let mean_modulus = traces.iter().flat_map(|t| t.values()).map(|v| v.norm()).sum::<f64>() / n as f64;
        distributions.push(PairDistributions {
            pair: traces[0].pair(),
            mean: pooled_mean(&traces),
            mean_modulus,
            modulus,
            phase,
        });
    }

    Ok(EnsembleStats {
        dimension: config.dimension,
        realizations: config.realizations,
        mean_spacing: config.mean_spacing(),
        tau_abs: config.tau_abs(),
        unitary: config.is_unitary(),
        transmission_a,
        transmission_b,
        transmission_a_error,
        transmission_b_error,
        expected_transmission_a: config.expected_transmission_a(),
        expected_transmission_b: config.expected_transmission_b(),
        autocorrelation,
        correlation_width,
        distributions,
        warnings,
    })
}
