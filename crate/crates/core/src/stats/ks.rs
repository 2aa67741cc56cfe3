use serde::{Deserialize, Serialize};

use super::curve::StatCurve;
use super::reference::{reference_cdf, Model};
use super::unfold::UnfoldedSpectrum;
use crate::error::{invalid, Error, Result};

fn check_cumulative(c: &StatCurve, which: &str) -> Result<()> {
    if !c.kind.is_cumulative() {
        return invalid(format!("{which} curve is not a cumulative distribution"));
    }
    if c.is_empty() {
        return invalid(format!("{which} curve is empty"));
    }
    if c.ordinate.windows(2).any(|w| w[1] < w[0] - 1e-12) {
        return invalid(format!("{which} curve is not monotone"));
    }
    Ok(())
}

/// Kolmogorov-Smirnov distance: the supremum of the absolute difference of
/// two cumulative curves over the union of their grids. Step curves are
/// compared on both sides of every jump.
pub fn ks_distance(empirical: &StatCurve, reference: &StatCurve) -> Result<f64> {
    check_cumulative(empirical, "empirical")?;
    check_cumulative(reference, "reference")?;
    let mut grid: Vec<f64> = empirical.abscissa.iter().chain(&reference.abscissa).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid
        .iter()
        .flat_map(|&x| {
            [false, true].map(|left| (empirical.value_at(x, left) - reference.value_at(x, left)).abs())
        })
        .fold(0.0, f64::max))
}

/// Kolmogorov-Smirnov distance of the pooled spacings to the exact
/// cumulative law of `model`.
pub fn ks_to_model(u: &UnfoldedSpectrum, model: Model) -> Result<f64> {
    let mut s = u.spacings();
    if s.is_empty() {
        return Err(Error::InsufficientData("no spacings to compare".into()));
    }
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    Ok(s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = reference_cdf(model, x);
            (((i + 1) as f64 / n) - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max))
}

/// Moments of the pooled spacings and their distances to the three
/// reference laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingSummary {
    pub spacings: usize,
    pub mean: f64,
    pub variance: f64,
    pub ks_poisson: f64,
    pub ks_goe: f64,
    pub ks_semi_poisson: f64,
}

impl SpacingSummary {
    pub fn new(u: &UnfoldedSpectrum) -> Result<Self> {
        let s = u.spacings();
        if s.is_empty() {
            return Err(Error::InsufficientData("no spacings to summarise".into()));
        }
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let variance = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Ok(Self {
            spacings: s.len(),
            mean,
            variance,
            ks_poisson: ks_to_model(u, Model::Poisson)?,
            ks_goe: ks_to_model(u, Model::Goe)?,
            ks_semi_poisson: ks_to_model(u, Model::SemiPoisson)?,
        })
    }

    pub fn ks(&self, model: Model) -> f64 {
        match model {
            Model::Poisson => self.ks_poisson,
            Model::Goe => self.ks_goe,
            Model::SemiPoisson => self.ks_semi_poisson,
        }
    }

    /// Reference law with the smallest distance.
    pub fn closest(&self) -> Model {
        Model::ALL
            .into_iter()
            .min_by(|a, b| self.ks(*a).total_cmp(&self.ks(*b)))
            .expect("three models")
    }
}
