use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::curve::{CurveKind, StatCurve};
use crate::error::{invalid, Error, Result};
use crate::special::integrate;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Reference level statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Poisson,
    Goe,
    SemiPoisson,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Poisson, Model::Goe, Model::SemiPoisson];

    pub fn name(self) -> &'static str {
        match self {
            Model::Poisson => "poisson",
            Model::Goe => "goe",
            Model::SemiPoisson => "semi-poisson",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" => Ok(Model::Poisson),
            "goe" | "wigner" => Ok(Model::Goe),
            "semi-poisson" | "semipoisson" | "semi_poisson" => Ok(Model::SemiPoisson),
            other => invalid(format!("unknown model '{other}' (poisson, goe, semi-poisson)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    /// Spacing density `P(s)`.
    P,
    /// Cumulative spacing distribution `I(s)`.
    I,
    /// Number variance.
    Sigma2,
    /// Spectral rigidity.
    Delta3,
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Statistic::P),
            "i" => Ok(Statistic::I),
            "sigma2" | "σ²" | "number-variance" => Ok(Statistic::Sigma2),
            "delta3" | "δ3" | "rigidity" => Ok(Statistic::Delta3),
            other => invalid(format!("unknown statistic '{other}' (p, i, sigma2, delta3)")),
        }
    }
}

/// Reference spacing distribution function.
pub fn reference_cdf(model: Model, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    match model {
        Model::Poisson => -(-s).exp_m1(),
        Model::Goe => -(-PI * s * s / 4.0).exp_m1(),
        Model::SemiPoisson => 1.0 - (1.0 + 2.0 * s) * (-2.0 * s).exp(),
    }
}

fn density(model: Model, s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    match model {
        Model::Poisson => (-s).exp(),
        Model::Goe => 0.5 * PI * s * (-PI * s * s / 4.0).exp(),
        Model::SemiPoisson => 4.0 * s * (-2.0 * s).exp(),
    }
}

fn goe_sigma2_raw(l: f64) -> f64 {
    2.0 / (PI * PI) * ((2.0 * PI * l).ln() + EULER_GAMMA + 1.0 - PI * PI / 8.0)
}

fn sigma2(model: Model, l: f64) -> f64 {
    match model {
        Model::Poisson => l,
        // asymptotic form; negative below L of about 0.1, clamped
        Model::Goe => goe_sigma2_raw(l).max(0.0),
        Model::SemiPoisson => l / 2.0 + (1.0 - (-4.0 * l).exp()) / 8.0,
    }
}

/// `Delta3(L) = (2/L^4) int_0^L (L^3 - 2 L^2 r + r^3) Sigma2(r) dr`.
pub(crate) fn delta3_from_sigma2(sigma2: impl Fn(f64) -> f64, l: f64) -> f64 {
    if l <= 0.0 {
        return 0.0;
    }
    let l2 = l * l;
    let kernel = |r: f64| (l2 * l - 2.0 * l2 * r + r * r * r) * sigma2(r);
    // graded towards zero, where Sigma2 may carry a logarithm
    let mut panels: Vec<f64> = (0..=40).rev().map(|k| l * 0.125 * 0.5f64.powi(k)).collect();
    panels.insert(0, 0.0);
    panels.extend((2..=8).map(|i| l * i as f64 / 8.0));
    2.0 / (l2 * l2) * integrate(kernel, &panels)
}

fn delta3(model: Model, l: f64) -> f64 {
    match model {
        Model::Poisson => l / 15.0,
        Model::Goe => ((2.0 * PI * l).ln() + EULER_GAMMA - 1.25 - PI * PI / 8.0).max(0.0) / (PI * PI),
        Model::SemiPoisson => delta3_from_sigma2(|r| sigma2(Model::SemiPoisson, r), l),
    }
}

/// Reference curve of `statistic` for `model` on `grid`.
///
/// Spacing laws are exact for Poisson and semi-Poisson and the Wigner
/// surmise for GOE. The GOE number variance and rigidity use the large-`L`
/// logarithmic forms, accurate for `L` of order one and above and clamped at
/// zero where they turn negative.
pub fn reference_curve(model: Model, statistic: Statistic, grid: &[f64]) -> Result<StatCurve> {
    if grid.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return invalid("reference grid must hold finite nonnegative values");
    }
    let (kind, f): (CurveKind, Box<dyn Fn(f64) -> f64>) = match statistic {
        Statistic::P => (CurveKind::Density, Box::new(move |s| density(model, s))),
        Statistic::I => (CurveKind::Cdf, Box::new(move |s| reference_cdf(model, s))),
        Statistic::Sigma2 => (CurveKind::NumberVariance, Box::new(move |l| sigma2(model, l))),
        Statistic::Delta3 => (CurveKind::Rigidity, Box::new(move |l| delta3(model, l))),
    };
    StatCurve::new(kind, grid.to_vec(), grid.iter().map(|&x| f(x)).collect())
}
