use serde::{Deserialize, Serialize};

use super::unfold::{SmoothCounting, UnfoldedSpectrum};
use crate::error::{invalid, Result};

/// A suspected missing level: a drop of the locally averaged fluctuating
/// staircase between levels `index - 1` and `index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissingLevel {
    /// Index of the first level after the gap.
    pub index: usize,
    /// Midpoint of the gap in the original variable.
    pub position: f64,
    /// The same midpoint on the unfolded scale.
    pub unfolded: f64,
    /// Change of the running mean across the gap, about `-1` per missing level.
    pub step: f64,
}

/// Scans the fluctuating part of the staircase, `N_fluc(k_n) = n - N(k_n)`,
/// for downward jumps. At every gap the mean of `N_fluc` over the `window`
/// levels after it is compared with the mean over the `window` levels
/// before it; each run of gaps where this difference falls below `-0.7` is
/// reported once, at its deepest point. Several adjacent missing levels show
/// up as a single report with a proportionally larger step.
pub fn missing_level_scan(
    levels: &[f64],
    counting: &impl SmoothCounting,
    window: usize,
) -> Result<Vec<MissingLevel>> {
    if window == 0 {
        return invalid("window must be at least one level");
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return invalid("levels must be ascending");
    }
    if levels.len() < 3 * window {
        log::warn!("missing-level scan needs at least {} levels, got {}", 3 * window, levels.len());
        return Ok(Vec::new());
    }
    let fluc: Vec<f64> = levels
        .iter()
        .enumerate()
        .map(|(i, &k)| (i + 1) as f64 - counting.smooth_count(k))
        .collect();
    let mut prefix = vec![0.0; fluc.len() + 1];
    for (i, f) in fluc.iter().enumerate() {
        prefix[i + 1] = prefix[i] + f;
    }
    let w = window as f64;
    let jump = |i: usize| (prefix[i + window] - prefix[i]) / w - (prefix[i] - prefix[i - window]) / w;

    let mut reports = Vec::new();
    let mut run: Option<(usize, f64)> = None;
    for i in window..=levels.len() - window {
        let d = jump(i);
        if d < -0.7 {
            run = match run {
                Some((j, best)) if best <= d => Some((j, best)),
                _ => Some((i, d)),
            };
        } else if let Some((j, best)) = run.take() {
            reports.push((j, best));
        }
    }
    if let Some(r) = run {
        reports.push(r);
    }
    Ok(reports
        .into_iter()
        .map(|(index, step)| {
            let position = 0.5 * (levels[index - 1] + levels[index]);
            MissingLevel { index, position, unfolded: counting.smooth_count(position), step }
        })
        .collect())
}

/// Splits sequences at the given unfolded positions so that no spacing
/// spans a cut. Each cut must lie strictly inside one of the sequences.
pub fn split_sequences(u: &UnfoldedSpectrum, cuts: &[f64]) -> Result<UnfoldedSpectrum> {
    let seqs = u.sequences();
    let mut per_sequence: Vec<Vec<f64>> = vec![Vec::new(); seqs.len()];
    for &c in cuts {
        let Some(i) = seqs.iter().position(|s| !s.is_empty() && s[0] < c && c < s[s.len() - 1]) else {
            return invalid(format!("cut {c} does not lie strictly inside any sequence"));
        };
        per_sequence[i].push(c);
    }
    let mut out = Vec::new();
    for (seq, mut cs) in seqs.iter().zip(per_sequence) {
        cs.sort_by(f64::total_cmp);
        let mut start = 0;
        for c in cs {
            let end = seq.partition_point(|&x| x < c);
            if end > start {
                out.push(seq[start..end].to_vec());
            }
            start = end;
        }
        out.push(seq[start..].to_vec());
    }
    UnfoldedSpectrum::new(out, format!("{} split at {} cut(s)", u.provenance(), cuts.len()))
}
