use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::reference::Model;
use super::unfold::UnfoldedSpectrum;
use crate::error::{invalid, Result};

/// Sorted eigenvalues of a `dim x dim` GOE matrix scaled so that the
/// semicircle has radius one (off-diagonal variance `1/(4 dim)`, diagonal
/// variance `1/(2 dim)`).
pub fn goe_eigenvalues(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut e = crate::rmt::sample_goe_matrix(dim, rng).symmetric_eigenvalues().as_slice().to_vec();
    e.sort_by(f64::total_cmp);
    e
}

/// Smooth counting function of the radius-one semicircle for `dim` levels,
/// `N(E) = dim [1/2 + (E sqrt(1 - E^2) + asin E) / pi]`.
pub fn goe_counting(dim: usize) -> impl Fn(f64) -> f64 {
    move |e: f64| {
        let e = e.clamp(-1.0, 1.0);
        dim as f64 * (0.5 + (e * (1.0 - e * e).sqrt() + e.asin()) / std::f64::consts::PI)
    }
}

fn sequence(model: Model, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match model {
        Model::Poisson => {
            let mut x = 0.0;
            (0..n)
                .map(|_| {
                    let g: f64 = Exp1.sample(rng);
                    x += g;
                    x
                })
                .collect()
        }
        Model::SemiPoisson => {
            let mut x = 0.0;
            (0..n)
                .map(|_| {
                    let a: f64 = Exp1.sample(rng);
                    let b: f64 = Exp1.sample(rng);
                    x += a + b;
                    0.5 * x
                })
                .collect()
        }
        Model::Goe => {
            let dim = 2 * n;
            let e = goe_eigenvalues(dim, rng);
            let count = goe_counting(dim);
            e[n / 2..n / 2 + n].iter().map(|&x| count(x)).collect()
        }
    }
}

fn check(n: usize) -> Result<()> {
    if n < 2 {
        return invalid(format!("a reference sequence needs at least 2 levels, got {n}"));
    }
    Ok(())
}

/// One unfolded sequence of `n` levels drawn from `model`.
///
/// Poisson levels are cumulative sums of unit exponential gaps. Semi-Poisson
/// levels keep every second level of a Poisson sequence, halved. GOE levels
/// are the central half of the spectrum of a `2n`-dimensional GOE matrix,
/// unfolded with the semicircle law.
pub fn generate_reference_sequence(model: Model, n: usize, seed: u64) -> Result<UnfoldedSpectrum> {
    check(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    UnfoldedSpectrum::single(sequence(model, n, &mut rng), format!("{model} n={n} seed={seed}"))
}

/// `count` independent sequences; realisation `i` draws from stream `i` of
/// the seeded generator, so the result does not depend on scheduling.
pub fn generate_reference_ensemble(model: Model, n: usize, count: usize, seed: u64) -> Result<UnfoldedSpectrum> {
    check(n)?;
    if count == 0 {
        return invalid("ensemble needs at least one sequence");
    }
    let sequences = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            sequence(model, n, &mut rng)
        })
        .collect();
    UnfoldedSpectrum::new(sequences, format!("{model} n={n} x{count} seed={seed}"))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_to_model, reference_cdf};

    fn spacing_variance(u: &UnfoldedSpectrum) -> f64 {
        let s = u.spacings();
        let m = s.iter().sum::<f64>() / s.len() as f64;
        s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / s.len() as f64
    }

    #[test]
    fn poisson_variance() {
        let u = generate_reference_sequence(Model::Poisson, 10_000, 3).unwrap();
        assert!((spacing_variance(&u) - 1.0).abs() < 0.05);
    }

    #[test]
    fn semi_poisson_variance_and_shape() {
        let u = generate_reference_sequence(Model::SemiPoisson, 10_000, 4).unwrap();
        assert!((spacing_variance(&u) - 0.5).abs() < 0.03);
        assert!(ks_to_model(&u, Model::SemiPoisson).unwrap() < 0.02);
    }

    #[test]
    fn goe_central_half_is_wigner() {
        let u = generate_reference_sequence(Model::Goe, 500, 5).unwrap();
        assert_eq!(u.level_count(), 500);
        assert!((u.mean_spacing() - 1.0).abs() < 0.05);
        assert!(ks_to_model(&u, Model::Goe).unwrap() < 0.03);
    }

    #[test]
    fn ensemble_is_reproducible() {
        let a = generate_reference_ensemble(Model::Poisson, 50, 8, 9).unwrap();
        let b = generate_reference_ensemble(Model::Poisson, 50, 8, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.sequences()[0], a.sequences()[1]);
        assert!(generate_reference_sequence(Model::Goe, 1, 0).is_err());
        assert!(reference_cdf(Model::Poisson, -1.0) == 0.0);
    }
}
