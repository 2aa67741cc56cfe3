use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::Resonance;
use super::peaks::{detect_peaks, PeakGuess};
use super::trace::ComplexTrace;
use crate::error::{invalid, Error, Result};

const MAX_ITERATIONS: usize = 200;
const MAX_SWEEPS: usize = 100;
const STEP_TOLERANCE: f64 = 1e-8;
const MIN_SAMPLES_PER_RESONANCE: usize = 8;

/// A fitted resonance with curvature-based one-sigma uncertainties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedResonance {
    pub resonance: Resonance,
    pub center_error: f64,
    pub width_error: f64,
    pub amplitude_error: f64,
    pub converged: bool,
    /// Empty when the fit converged.
    pub diagnostics: String,
}

/// One jointly fitted group of resonances with overlapping windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub lo: f64,
    pub hi: f64,
    pub resonances: usize,
    pub samples: usize,
    pub background: Complex64,
    pub rms_residual: f64,
    pub iterations: usize,
    /// Sum of squared residuals after each accepted step of the final pass.
    pub cost_history: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub pair: (u8, u8),
    pub resonances: Vec<FittedResonance>,
    pub clusters: Vec<ClusterReport>,
}

impl ResonanceSet {
    pub fn centers(&self) -> Vec<f64> {
        self.resonances.iter().map(|r| r.resonance.center).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.resonances.iter().all(|r| r.converged)
    }
}

struct Cluster {
    members: Vec<usize>,
    lo: f64,
    hi: f64,
    range: std::ops::Range<usize>,
}

fn clusters(trace: &ComplexTrace, guesses: &[PeakGuess], half_width: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for (i, g) in guesses.iter().enumerate() {
        let lo = g.center - half_width * g.width;
        let hi = g.center + half_width * g.width;
        match out.last_mut() {
            Some(c) if lo <= c.hi => {
                c.members.push(i);
                c.hi = c.hi.max(hi);
            }
            _ => out.push(Cluster { members: vec![i], lo, hi, range: 0..0 }),
        }
    }
    let f = trace.frequencies();
    for c in &mut out {
        c.range = f.partition_point(|&x| x < c.lo)..f.partition_point(|&x| x <= c.hi);
    }
    out
}

struct LmOutcome {
    resonances: Vec<Resonance>,
    background: Complex64,
    errors: Vec<[f64; 3]>,
    cost: f64,
    cost_history: Vec<f64>,
    iterations: usize,
    converged: bool,
}

/// Levenberg-Marquardt fit of `b - i sum a_n/(x - x_n + i exp(g_n)/2)` to
/// `target` in the scaled variable `x = (f - origin)/scale`.
fn levenberg_marquardt(f: &[f64], target: &[Complex64], start: &[Resonance], background: Complex64) -> LmOutcome {
    let scale = start.iter().map(|r| r.width).sum::<f64>() / start.len() as f64;
    let origin = 0.5 * (f[0] + f[f.len() - 1]);
    let x: Vec<f64> = f.iter().map(|&v| (v - origin) / scale).collect();
    let m = start.len();
    let np = 3 * m + 2;
    let mut p = DVector::zeros(np);
    for (n, r) in start.iter().enumerate() {
        p[3 * n] = (r.center - origin) / scale;
        p[3 * n + 1] = (r.width / scale).ln();
        p[3 * n + 2] = r.signed_amplitude() / scale;
    }
    p[3 * m] = background.re;
    p[3 * m + 1] = background.im;

    let residuals = |p: &DVector<f64>| -> Vec<Complex64> {
        let b = Complex64::new(p[3 * m], p[3 * m + 1]);
        x.iter()
            .zip(target)
            .map(|(&xk, &yk)| {
                let mut s = b;
                for n in 0..m {
                    let d = Complex64::new(xk - p[3 * n], 0.5 * p[3 * n + 1].exp());
                    s -= Complex64::i() * p[3 * n + 2] / d;
                }
                s - yk
            })
            .collect()
    };
    let cost_of = |r: &[Complex64]| r.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let jacobian = |p: &DVector<f64>| -> DMatrix<f64> {
        let mut j = DMatrix::zeros(2 * x.len(), np);
        for (k, &xk) in x.iter().enumerate() {
            for n in 0..m {
                let gamma = p[3 * n + 1].exp();
                let a = p[3 * n + 2];
                let d = Complex64::new(xk - p[3 * n], 0.5 * gamma);
                let d2 = d * d;
                let dx = -Complex64::i() * a / d2;
                let dg = -a * gamma / (2.0 * d2);
                let da = -Complex64::i() / d;
                for (col, v) in [(3 * n, dx), (3 * n + 1, dg), (3 * n + 2, da)] {
                    j[(2 * k, col)] = v.re;
                    j[(2 * k + 1, col)] = v.im;
                }
            }
            j[(2 * k, 3 * m)] = 1.0;
            j[(2 * k + 1, 3 * m + 1)] = 1.0;
        }
        j
    };
    let flatten = |r: &[Complex64]| DVector::from_iterator(2 * r.len(), r.iter().flat_map(|c| [c.re, c.im]));

    let mut r = residuals(&p);
    let mut cost = cost_of(&r);
    let mut cost_history = vec![cost];
    let mut mu = 1e-3;
    let mut converged = cost == 0.0;
    let mut iterations = 0;
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let j = jacobian(&p);
        let a = j.transpose() * &j;
        let g = j.transpose() * flatten(&r);
        let diag_floor = 1e-12 * a.diagonal().max().max(1e-300);
        let mut accepted = false;
        while mu < 1e16 {
            let mut lhs = a.clone();
            for i in 0..np {
                lhs[(i, i)] += mu * a[(i, i)].max(diag_floor);
            }
            let Some(chol) = lhs.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let small = step.iter().zip(p.iter()).all(|(d, v)| d.abs() <= STEP_TOLERANCE * (v.abs() + 1.0));
            let trial = &p + &step;
            let r_trial = residuals(&trial);
            let c_trial = cost_of(&r_trial);
            if c_trial.is_finite() && c_trial <= cost {
                p = trial;
                r = r_trial;
                cost = c_trial;
                cost_history.push(cost);
                mu = (mu / 3.0).max(1e-12);
                accepted = true;
                converged = small || cost == 0.0;
                break;
            }
            if small {
                converged = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted && !converged {
            break;
        }
    }

    let j = jacobian(&p);
    let dof = (2 * x.len()).saturating_sub(np).max(1) as f64;
    let s2 = cost / dof;
    let cov = (j.transpose() * &j).try_inverse();
    let mut errors = Vec::with_capacity(m);
    let mut resonances = Vec::with_capacity(m);
    for n in 0..m {
        let width = scale * p[3 * n + 1].exp();
        resonances.push(Resonance::signed(origin + scale * p[3 * n], width, scale * p[3 * n + 2]));
        let sd = |i: usize| cov.as_ref().map_or(f64::NAN, |c| (s2 * c[(i, i)]).max(0.0).sqrt());
        errors.push([scale * sd(3 * n), width * sd(3 * n + 1), scale * sd(3 * n + 2)]);
    }
    LmOutcome {
        resonances,
        background: Complex64::new(p[3 * m], p[3 * m + 1]),
        errors,
        cost,
        cost_history,
        iterations,
        converged,
    }
}

/// Fits the Breit-Wigner form with a complex constant background to
/// `trace`, starting from `guesses`.
///
/// Each guess claims the window `center +- half_width * width`; resonances
/// whose windows overlap are fitted jointly as one cluster over the union
/// of their windows. Clusters are refined in turn, each against the data
/// minus the current terms of all other clusters, until the parameters
/// stop changing. Widths are fitted through their logarithm. A resonance
/// whose cluster fails to converge is returned flagged, with diagnostics.
pub fn fit_resonances(trace: &ComplexTrace, guesses: &[PeakGuess], half_width: f64) -> Result<ResonanceSet> {
    if guesses.is_empty() {
        return invalid("at least one resonance guess is required");
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return invalid(format!("window half-width must be positive, got {half_width}"));
    }
    if let Some(g) = guesses.iter().find(|g| !(g.width > 0.0 && g.width.is_finite() && g.center.is_finite())) {
        return invalid(format!("invalid guess {g:?}"));
    }
    let mut guesses = guesses.to_vec();
    guesses.sort_by(|a, b| a.center.total_cmp(&b.center));
    let groups = clusters(trace, &guesses, half_width);
    for c in &groups {
        if c.range.len() < MIN_SAMPLES_PER_RESONANCE * c.members.len() {
            return Err(Error::InsufficientData(format!(
                "window [{}, {}] holds {} samples for {} resonance(s)",
                c.lo,
                c.hi,
                c.range.len(),
                c.members.len()
            )));
        }
    }

    let f = trace.frequencies();
    let delta = trace.delta();
    let mut current: Vec<Resonance> =
        guesses.iter().map(|g| Resonance::signed(g.center, g.width, g.amplitude)).collect();
    let mut backgrounds = vec![Complex64::new(0.0, 0.0); groups.len()];
    let mut outcomes: Vec<Option<LmOutcome>> = (0..groups.len()).map(|_| None).collect();
    let mut sweeps_converged = groups.len() == 1;
    for sweep in 0..MAX_SWEEPS {
        let mut change: f64 = 0.0;
        for (ci, c) in groups.iter().enumerate() {
            let target: Vec<Complex64> = c
                .range
                .clone()
                .map(|k| {
                    let others: Complex64 = current
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !c.members.contains(i))
                        .map(|(_, r)| r.term(f[k]))
                        .sum();
                    trace.values()[k] - delta - others
                })
                .collect();
            let start: Vec<Resonance> = c.members.iter().map(|&i| current[i]).collect();
            let out = levenberg_marquardt(&f[c.range.clone()], &target, &start, backgrounds[ci]);
            for (&i, r) in c.members.iter().zip(&out.resonances) {
                let old = current[i];
                change = change
                    .max((r.center - old.center).abs() / old.width)
                    .max((r.width / old.width).ln().abs())
                    .max((r.signed_amplitude() - old.signed_amplitude()).abs() / old.width);
                current[i] = *r;
            }
            backgrounds[ci] = out.background;
            outcomes[ci] = Some(out);
        }
        if groups.len() == 1 || (sweep > 0 && change < STEP_TOLERANCE) {
            sweeps_converged = true;
            break;
        }
    }

    let mut resonances = Vec::with_capacity(current.len());
    let mut reports = Vec::with_capacity(groups.len());
    for (c, out) in groups.iter().zip(outcomes) {
        let out = out.expect("every cluster fitted");
        let ok = out.converged && sweeps_converged;
        let diagnostics = if ok {
            String::new()
        } else if !out.converged {
            format!("no convergence after {} iterations, cost {:.3e}", out.iterations, out.cost)
        } else {
            format!("cluster refinement did not settle after {MAX_SWEEPS} passes")
        };
        for (r, e) in out.resonances.iter().zip(&out.errors) {
            resonances.push(FittedResonance {
                resonance: *r,
                center_error: e[0],
                width_error: e[1],
                amplitude_error: e[2],
                converged: ok,
                diagnostics: diagnostics.clone(),
            });
        }
        if !ok {
            log::warn!("fit in [{}, {}]: {diagnostics}", c.lo, c.hi);
        }
        reports.push(ClusterReport {
            lo: c.lo,
            hi: c.hi,
            resonances: c.members.len(),
            samples: c.range.len(),
            background: out.background,
            rms_residual: (out.cost / c.range.len() as f64).sqrt(),
            iterations: out.iterations,
            cost_history: out.cost_history,
            converged: ok,
        });
    }
    resonances.sort_by(|a, b| a.resonance.center.total_cmp(&b.resonance.center));
    Ok(ResonanceSet { pair: trace.pair(), resonances, clusters: reports })
}

/// Settings for [`fit_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Minimum peak prominence in units of `|S|`.
    pub prominence: f64,
    /// Fit window half-width in units of the guessed width.
    pub half_width: f64,
    /// Width of the independent frequency windows the trace is cut into.
    pub window: f64,
}

/// Detects and fits all resonances of a long trace, window by window.
///
/// Each window is processed on a slice extended by a margin on both sides
/// so that resonances near its edges see their neighbours; only resonances
/// centred inside the window proper are kept. Windows run in parallel and
/// the merged list is sorted by centre.
pub fn fit_trace(trace: &ComplexTrace, options: &FitOptions) -> Result<ResonanceSet> {
    if !(options.window.is_finite() && options.window > 0.0) {
        return invalid("fit window width must be positive");
    }
    if trace.is_empty() {
        return Err(Error::InsufficientData("empty trace".into()));
    }
    let f = trace.frequencies();
    let (first, last) = (f[0], f[f.len() - 1]);
    let count = (((last - first) / options.window).floor() as usize + 1).max(1);
    let margin = 0.25 * options.window;
    let parts: Vec<ResonanceSet> = (0..count)
        .into_par_iter()
        .map(|w| -> Result<Option<ResonanceSet>> {
            let lo = first + w as f64 * options.window;
            let hi = if w + 1 == count { f64::INFINITY } else { lo + options.window };
            let slice = trace.slice(lo - margin, hi + margin);
            let sf = slice.frequencies();
            let guesses: Vec<PeakGuess> = detect_peaks(&slice, options.prominence)
                .into_iter()
                .filter(|g| {
                    let a = sf.partition_point(|&x| x < g.center - options.half_width * g.width);
                    let b = sf.partition_point(|&x| x <= g.center + options.half_width * g.width);
                    let ok = b - a >= MIN_SAMPLES_PER_RESONANCE;
                    if !ok {
                        log::warn!("skipping resonance guess at {} with too few samples", g.center);
                    }
                    ok
                })
                .collect();
            if guesses.is_empty() {
                return Ok(None);
            }
            let mut set = fit_resonances(&slice, &guesses, options.half_width)?;
            set.resonances.retain(|r| r.resonance.center >= lo && r.resonance.center < hi);
            Ok(Some(set))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut resonances: Vec<FittedResonance> = parts.iter().flat_map(|p| p.resonances.clone()).collect();
    resonances.sort_by(|a, b| a.resonance.center.total_cmp(&b.resonance.center));
    let clusters = parts.into_iter().flat_map(|p| p.clusters).collect();
    Ok(ResonanceSet { pair: trace.pair(), resonances, clusters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::breit_wigner_model;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn ten_resonances() -> Vec<Resonance> {
        let mut c = 2.0e9;
        let spacings = [5.0, 3.0, 8.0, 4.0, 10.0, 6.0, 3.5, 7.0, 9.0];
        let mut out = Vec::new();
        for i in 0..10 {
            let width = 1.0e6 * (1.0 + 0.1 * i as f64);
            let amp = width * (0.1 + 0.03 * i as f64) * if i % 3 == 0 { -1.0 } else { 1.0 };
            out.push(Resonance::signed(c, width, amp));
            if i < 9 {
                c += spacings[i] * width;
            }
        }
        out
    }

    fn perturbed_guesses(rs: &[Resonance]) -> Vec<PeakGuess> {
        rs.iter()
            .enumerate()
            .map(|(i, r)| PeakGuess {
                center: r.center + 0.2 * r.width * if i % 2 == 0 { 1.0 } else { -1.0 },
                width: r.width * 1.3,
                amplitude: r.signed_amplitude() * 0.8,
            })
            .collect()
    }

    #[test]
    fn noiseless_round_trip() {
        let rs = ten_resonances();
        let g = grid(1.99e9, 2.08e9, 9000);
        let t = breit_wigner_model(&rs, false, &g).unwrap();
        let set = fit_resonances(&t, &perturbed_guesses(&rs), 3.0).unwrap();
        assert!(set.all_converged());
        for (fit, truth) in set.resonances.iter().zip(&rs) {
            let r = fit.resonance;
            assert!(((r.center - truth.center) / truth.center).abs() < 1e-6);
            assert!(((r.width - truth.width) / truth.width).abs() < 1e-4, "{r:?} vs {truth:?}");
            assert_eq!(r.sign, truth.sign);
        }
    }

    #[test]
    fn accepted_steps_never_raise_cost() {
        let rs = ten_resonances();
        let t = breit_wigner_model(&rs, true, &grid(1.99e9, 2.08e9, 9000)).unwrap();
        let set = fit_resonances(&t, &perturbed_guesses(&rs), 3.0).unwrap();
        for c in &set.clusters {
            assert!(c.cost_history.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn noisy_centres_within_fiftieth_of_width() {
        let rs = ten_resonances();
        let g = grid(1.99e9, 2.08e9, 9000);
        let clean = breit_wigner_model(&rs, false, &g).unwrap();
        let peak = clean.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let noise = Normal::new(0.0, 0.01 * peak).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let values = clean
                .values()
                .iter()
                .map(|v| v + Complex64::new(noise.sample(&mut rng), noise.sample(&mut rng)))
                .collect();
            let t = ComplexTrace::new(g.clone(), values, (1, 2)).unwrap();
            let set = fit_resonances(&t, &perturbed_guesses(&rs), 3.0).unwrap();
            for (fit, truth) in set.resonances.iter().zip(&rs) {
                assert!((fit.resonance.center - truth.center).abs() < truth.width / 50.0);
            }
        }
    }

    #[test]
    fn weakly_overlapping_pair() {
        let rs = [Resonance::new(1.0, 0.01, 0.003), Resonance::new(1.01, 0.01, 0.002)];
        let g = grid(0.9, 1.1, 4001);
        let t = breit_wigner_model(&rs, false, &g).unwrap();
        let guesses = [
            PeakGuess { center: 0.998, width: 0.012, amplitude: 0.003 },
            PeakGuess { center: 1.013, width: 0.012, amplitude: 0.002 },
        ];
        let set = fit_resonances(&t, &guesses, 3.0).unwrap();
        assert_eq!(set.clusters.len(), 1);
        for (fit, truth) in set.resonances.iter().zip(&rs) {
            assert!((fit.resonance.center - truth.center).abs() < truth.width / 10.0);
        }
    }

    #[test]
    fn background_is_absorbed() {
        let r = Resonance::new(5.0, 0.1, 0.02);
        let g = grid(4.5, 5.5, 801);
        let mut t = breit_wigner_model(&[r], false, &g).unwrap();
        let b = Complex64::new(0.01, -0.02);
        t = ComplexTrace::new(g, t.values().iter().map(|v| v + b).collect(), (1, 2)).unwrap();
        let set = fit_resonances(&t, &[PeakGuess { center: 5.01, width: 0.12, amplitude: 0.015 }], 4.0).unwrap();
        assert!((set.clusters[0].background - b).norm() < 1e-9);
        assert!((set.resonances[0].resonance.center - 5.0).abs() < 1e-9);
    }

    #[test]
    fn too_few_samples_rejected() {
        let r = Resonance::new(5.0, 0.1, 0.02);
        let t = breit_wigner_model(&[r], false, &grid(4.0, 6.0, 20)).unwrap();
        let g = [PeakGuess { center: 5.0, width: 0.1, amplitude: 0.02 }];
        assert!(matches!(fit_resonances(&t, &g, 3.0), Err(Error::InsufficientData(_))));
        assert!(fit_resonances(&t, &[], 3.0).is_err());
    }

    #[test]
    fn windowed_fit_finds_all() {
        let mut rs = Vec::new();
        for i in 0..50 {
            let c = 1.0 + 0.02 * i as f64 + 0.003 * ((i * 7) % 5) as f64;
            rs.push(Resonance::new(c, 0.002, 0.0006));
        }
        let g = grid(0.99, 2.0, 40_000);
        let t = breit_wigner_model(&rs, false, &g).unwrap();
        let opts = FitOptions { prominence: 0.05, half_width: 3.0, window: 0.25 };
        let set = fit_trace(&t, &opts).unwrap();
        assert_eq!(set.resonances.len(), 50);
        for (fit, truth) in set.resonances.iter().zip(&rs) {
            assert!((fit.resonance.center - truth.center).abs() < 1e-6);
        }
    }
}
