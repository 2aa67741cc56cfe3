use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{invalid, Error, Result};
use crate::resonance::ComplexTrace;
use crate::stats::{CurveKind, StatCurve};

fn same_pair(traces: &[ComplexTrace]) -> Result<(u8, u8)> {
    let Some(first) = traces.first() else {
        return Err(Error::InsufficientData("no traces".into()));
    };
    if traces.iter().any(|t| t.pair() != first.pair()) {
        return invalid("traces belong to different channel pairs");
    }
    Ok(first.pair())
}

pub(crate) fn pooled_mean(traces: &[ComplexTrace]) -> Complex64 {
    let n: usize = traces.iter().map(ComplexTrace::len).sum();
    traces.iter().flat_map(|t| t.values()).sum::<Complex64>() / n as f64
}

/// Transmission coefficient `T_c = 1 - |<S_cc>|^2`, averaging over all
/// frequencies and realisations. Needs at least ten realisations.
pub fn transmission_from_average(traces: &[ComplexTrace]) -> Result<f64> {
    let (a, b) = same_pair(traces)?;
    if a != b {
        return invalid("transmission coefficients need diagonal elements");
    }
    if traces.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "{} realisations; at least 10 are needed",
            traces.len()
        )));
    }
    Ok(1.0 - pooled_mean(traces).norm_sqr())
}

fn uniform_step(trace: &ComplexTrace) -> Result<f64> {
    let f = trace.frequencies();
    if f.len() < 2 {
        return Err(Error::InsufficientData("trace needs two or more samples".into()));
    }
    let h = (f[f.len() - 1] - f[0]) / (f.len() - 1) as f64;
    if f.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
        return invalid("autocorrelation needs a uniform frequency grid");
    }
    Ok(h)
}

/// Modulus of the autocorrelation
/// `C(eps) = <S(f) S*(f + eps)> - |<S>|^2` for lags `0, h, ..., max_lag`
/// on the common uniform grid of step `h`.
///
/// Every trace is cut into consecutive windows of length `window` (the
/// whole trace when `None`); lagged products are taken within windows and
/// averaged over all windows and traces, and `<S>` is the mean over the
/// same samples, so that `C(0)` is their variance. Lags longer than a
/// window are dropped with a warning.
pub fn autocorrelation(traces: &[ComplexTrace], max_lag: f64, window: Option<f64>) -> Result<StatCurve> {
    same_pair(traces)?;
    let h = uniform_step(&traces[0])?;
    let len = traces[0].len();
    if traces.iter().any(|t| t.len() != len || uniform_step(t).map_or(true, |s| (s - h).abs() > 1e-6 * h)) {
        return invalid("traces must share one frequency grid");
    }
    if !(max_lag >= 0.0 && max_lag.is_finite()) {
        return invalid("maximum lag must be nonnegative");
    }
    let block = match window {
        Some(w) if w > 0.0 => ((w / h).round() as usize).clamp(1, len),
        Some(w) => return invalid(format!("window must be positive, got {w}")),
        None => len,
    };
    let blocks = len / block;
    let used = blocks * block;
    let mut lags = (max_lag / h).round() as usize;
    let mut warnings = Vec::new();
    if lags >= block {
        warnings.push(format!("lags beyond the window of {block} samples dropped"));
        log::warn!("{}", warnings[0]);
        lags = block - 1;
    }
    let mean = traces.iter().flat_map(|t| &t.values()[..used]).sum::<Complex64>() / (traces.len() * used) as f64;
    let mut ordinate = Vec::with_capacity(lags + 1);
    for k in 0..=lags {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        for t in traces {
            let v = t.values();
            for b in 0..blocks {
                let s = &v[b * block..(b + 1) * block];
                for i in 0..block - k {
                    acc += s[i] * s[i + k].conj();
                }
                count += block - k;
            }
        }
        ordinate.push((acc / count as f64 - mean.norm_sqr()).norm());
    }
    let abscissa = (0..=lags).map(|k| k as f64 * h).collect();
    let mut curve = StatCurve::new(CurveKind::Density, abscissa, ordinate)?;
    curve.warnings = warnings;
    Ok(curve)
}

/// Lag at which an autocorrelation modulus first falls to half its value
/// at zero, by linear interpolation.
pub fn correlation_width(curve: &StatCurve) -> Option<f64> {
    let c0 = *curve.ordinate.first()?;
    let half = 0.5 * c0;
    curve.ordinate.windows(2).zip(curve.abscissa.windows(2)).find_map(|(y, x)| {
        (y[1] <= half).then(|| x[0] + (y[0] - half) / (y[0] - y[1]) * (x[1] - x[0]))
    })
}

/// Normalised histograms of `|S|` on `[0, max(1, max |S|)]` and of the
/// phase folded to `[0, 2 pi)`, each with `bins` bins.
pub fn element_distributions(traces: &[ComplexTrace], bins: usize) -> Result<(StatCurve, StatCurve)> {
    same_pair(traces)?;
    if bins == 0 {
        return invalid("histograms need at least one bin");
    }
    let values: Vec<Complex64> = traces.iter().flat_map(|t| t.values().iter().copied()).collect();
    if values.len() < 10_000 {
        log::warn!("only {} samples for the element distributions", values.len());
    }
    let top = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let histogram = |xs: Vec<f64>, hi: f64| -> Result<StatCurve> {
        let w = hi / bins as f64;
        let mut counts = vec![0u64; bins];
        for x in &xs {
            counts[((x / w).floor() as usize).min(bins - 1)] += 1;
        }
        let norm = 1.0 / (xs.len() as f64 * w);
        let mut c = StatCurve::new(
            CurveKind::Histogram,
            (0..bins).map(|i| (i as f64 + 0.5) * w).collect(),
            counts.iter().map(|&n| n as f64 * norm).collect(),
        )?;
        c.counts = Some(counts);
        Ok(c)
    };
    let modulus = histogram(values.iter().map(|v| v.norm()).collect(), top)?;
    let phase = histogram(values.iter().map(|v| v.arg().rem_euclid(TAU)).collect(), TAU)?;
    Ok((modulus, phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(values: Vec<Complex64>, pair: (u8, u8)) -> ComplexTrace {
        let f = (0..values.len()).map(|i| i as f64 * 0.05).collect();
        ComplexTrace::new(f, values, pair).unwrap()
    }

    fn wavy(n: usize, phase: f64) -> Vec<Complex64> {
        (0..n).map(|i| Complex64::from_polar(0.5, 0.3 * i as f64 + phase) + 0.1).collect()
    }

    #[test]
    fn zero_lag_is_sample_variance() {
        let ts: Vec<ComplexTrace> = (0..4).map(|k| trace(wavy(200, k as f64), (1, 2))).collect();
        let c = autocorrelation(&ts, 1.0, None).unwrap();
        let all: Vec<Complex64> = ts.iter().flat_map(|t| t.values().to_vec()).collect();
        let m = all.iter().sum::<Complex64>() / all.len() as f64;
        let var = all.iter().map(|v| (v - m).norm_sqr()).sum::<f64>() / all.len() as f64;
        assert!((c.ordinate[0] - var).abs() < 1e-15, "{} vs {var}", c.ordinate[0]);
        assert_eq!(c.len(), 21);
    }

    #[test]
    fn constant_trace_has_no_correlation() {
        let ts = vec![trace(vec![Complex64::new(0.3, -0.2); 100], (1, 1))];
        let c = autocorrelation(&ts, 2.0, Some(1.0)).unwrap();
        assert!(c.ordinate.iter().all(|&v| v < 1e-15));
        assert!(!c.warnings.is_empty());
    }

    #[test]
    fn transmission_needs_ten() {
        let ts: Vec<ComplexTrace> = (0..9).map(|_| trace(vec![Complex64::new(1.0, 0.0); 20], (1, 1))).collect();
        assert!(transmission_from_average(&ts).is_err());
        let ts: Vec<ComplexTrace> = (0..10).map(|_| trace(vec![Complex64::new(1.0, 0.0); 20], (1, 1))).collect();
        assert_eq!(transmission_from_average(&ts).unwrap(), 0.0);
    }

    #[test]
    fn identity_distributions() {
        let ts = vec![trace(vec![Complex64::new(1.0, 0.0); 100], (1, 1))];
        let (m, p) = element_distributions(&ts, 20).unwrap();
        assert_eq!(m.counts.as_ref().unwrap()[19], 100);
        assert_eq!(p.counts.as_ref().unwrap()[0], 100);
        let area: f64 = m.ordinate.iter().sum::<f64>() * (m.abscissa[1] - m.abscissa[0]);
        assert!((area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn width_interpolation() {
        let c = StatCurve::new(CurveKind::Density, vec![0.0, 1.0, 2.0], vec![1.0, 0.6, 0.2]).unwrap();
        assert!((correlation_width(&c).unwrap() - 1.25).abs() < 1e-12);
    }
}
