use rayon::prelude::*;

use super::curve::{CurveKind, StatCurve};
use super::unfold::UnfoldedSpectrum;
use crate::error::{invalid, Error, Result};

/// `L = 0.5, 1.0, ..., 20`.
pub fn default_l_grid() -> Vec<f64> {
    (1..=40).map(|i| 0.5 * i as f64).collect()
}

/// Window starts `first, first + L/4, ...` with the whole window
/// `[start, start + L)` inside the sequence.
fn window_starts(seq: &[f64], l: f64) -> impl Iterator<Item = f64> + '_ {
    let first = seq[0];
    let last = seq[seq.len() - 1];
    (0..)
        .map(move |j| first + j as f64 * 0.25 * l)
        .take_while(move |&e0| e0 + l <= last)
}

fn window(seq: &[f64], e0: f64, l: f64) -> &[f64] {
    let a = seq.partition_point(|&x| x < e0);
    let b = seq.partition_point(|&x| x < e0 + l);
    &seq[a..b]
}

/// Least-squares deviation of the staircase from the best straight line
/// over one window, divided by its length.
fn window_rigidity(levels: &[f64], e0: f64, l: f64) -> f64 {
    let half = 0.5 * l;
    let centre = e0 + half;
    let (mut i0, mut i1, mut i2) = (0.0, 0.0, 0.0);
    for (j, &e) in levels.iter().enumerate() {
        let x = e - centre;
        let rest = half - x;
        i0 += rest;
        i1 += 0.5 * (half * half - x * x);
        i2 += (2 * j + 1) as f64 * rest;
    }
    let min = i2 - i0 * i0 / l - 12.0 * i1 * i1 / (l * l * l);
    min.max(0.0) / l
}

fn long_range(
    u: &UnfoldedSpectrum,
    grid: &[f64],
    kind: CurveKind,
    per_window: fn(&[f64], f64, f64) -> f64,
) -> Result<StatCurve> {
    if grid.is_empty() || grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return invalid("window lengths must be positive");
    }
    let rows: Vec<(f64, Vec<String>)> = grid
        .par_iter()
        .map(|&l| {
            let mut warnings = Vec::new();
            let mut per_sequence = Vec::new();
            let mut count_sum = 0.0;
            let mut windows = 0usize;
            let mut skipped = 0usize;
            let mut short = 0usize;
            for seq in u.sequences() {
                let span = if seq.len() < 2 { 0.0 } else { seq[seq.len() - 1] - seq[0] };
                if span < 2.0 * l {
                    skipped += 1;
                    continue;
                }
                if span < 10.0 * l {
                    short += 1;
                }
                let mut acc = 0.0;
                let mut n = 0usize;
                for e0 in window_starts(seq, l) {
                    let w = window(seq, e0, l);
                    acc += per_window(w, e0, l);
                    count_sum += w.len() as f64;
                    n += 1;
                }
                windows += n;
                per_sequence.push(acc / n as f64);
            }
            if per_sequence.is_empty() {
                return Err(Error::InsufficientData(format!(
                    "window length {l} exceeds half the span of every sequence"
                )));
            }
            if skipped > 0 {
                warnings.push(format!("L={l}: skipped {skipped} sequence(s) shorter than 2L"));
            }
            if short > 0 {
                warnings.push(format!("L={l}: {short} sequence(s) shorter than 10L"));
            }
            let mean_count = count_sum / windows as f64;
            if (mean_count - l).abs() > 0.05 * l {
                warnings.push(format!("L={l}: mean window count {mean_count:.3} deviates from L by more than 5%"));
            }
            let value = per_sequence.iter().sum::<f64>() / per_sequence.len() as f64;
            Ok((value, warnings))
        })
        .collect::<Result<_>>()?;
    let mut curve = StatCurve::new(kind, grid.to_vec(), rows.iter().map(|r| r.0).collect())?;
    curve.warnings = rows.into_iter().flat_map(|r| r.1).collect();
    for w in &curve.warnings {
        log::warn!("{w}");
    }
    Ok(curve)
}

/// Number variance `Sigma2(L) = <(N(L) - L)^2>` over windows
/// `[E0, E0 + L)` sliding in steps of `L/4`, averaged within each sequence
/// and then over sequences. Sequences spanning less than `2L` are skipped
/// with a warning; if none remains the call fails.
pub fn number_variance(u: &UnfoldedSpectrum, grid: &[f64]) -> Result<StatCurve> {
    long_range(u, grid, CurveKind::NumberVariance, |w, _, l| (w.len() as f64 - l).powi(2))
}

/// Spectral rigidity `Delta3(L)`: the least-squares deviation of the level
/// staircase from a straight line over a window of length `L`, divided by
/// `L`, minimised analytically and averaged like [`number_variance`].
pub fn dyson_mehta(u: &UnfoldedSpectrum, grid: &[f64]) -> Result<StatCurve> {
    long_range(u, grid, CurveKind::Rigidity, window_rigidity)
}
