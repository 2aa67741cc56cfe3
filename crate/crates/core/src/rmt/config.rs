use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::goe::mean_spacing;
use crate::error::{invalid, Result};

/// `T = 4x/(1+x)^2` with `x = pi^2 v^2 / d`.
pub fn transmission_for_coupling(v2: f64, d: f64) -> f64 {
    let x = PI * PI * v2 / d;
    4.0 * x / ((1.0 + x) * (1.0 + x))
}

/// Coupling `v^2` on the weak-coupling branch (`pi^2 v^2 / d <= 1`) that
/// gives transmission `t`.
pub fn coupling_for_transmission(t: f64, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("transmission must lie in [0, 1], got {t}"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let x = (2.0 - t - 2.0 * (1.0 - t).sqrt()) / t;
    Ok(x * d / (PI * PI))
}

/// Parameters of a Monte Carlo ensemble of scattering matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmtEnsembleConfig {
    /// Matrix dimension `N`.
    pub dimension: usize,
    /// Antenna coupling `v_a^2`.
    pub coupling_a: f64,
    /// Antenna coupling `v_b^2`.
    pub coupling_b: f64,
    /// Number `Lambda` of fictitious absorption channels.
    pub fictitious_channels: usize,
    /// Transmission of each fictitious channel; `tau_abs = Lambda T`.
    pub fictitious_transmission: f64,
    pub realizations: usize,
    pub seed: u64,
    /// Half-width of the analysed energy band (semicircle radius is one).
    pub band: f64,
    /// Frequency step in units of `d`.
    pub step: f64,
    /// Largest autocorrelation lag in units of `d`.
    pub max_lag: f64,
    /// Averaging window for the autocorrelation in units of `d`; `None`
    /// uses the whole band.
    pub correlation_window: Option<f64>,
}

impl Default for RmtEnsembleConfig {
    fn default() -> Self {
        Self {
            dimension: 200,
            coupling_a: 0.0,
            coupling_b: 0.0,
            fictitious_channels: 10,
            fictitious_transmission: 0.0,
            realizations: 100,
            seed: 0,
            band: 0.25,
            step: 0.05,
            max_lag: 5.0,
            correlation_window: None,
        }
    }
}

impl RmtEnsembleConfig {
    /// Configuration with antenna transmissions `t_a`, `t_b` and total
    /// absorption `tau_abs` spread over `lambda` fictitious channels.
    pub fn from_transmissions(dimension: usize, t_a: f64, t_b: f64, lambda: usize, tau_abs: f64) -> Result<Self> {
        let d = mean_spacing(dimension, Self::default().band);
        let fictitious_transmission = match lambda {
            0 if tau_abs != 0.0 => return invalid("absorption needs at least one fictitious channel"),
            0 => 0.0,
            l => tau_abs / l as f64,
        };
        let c = Self {
            dimension,
            coupling_a: coupling_for_transmission(t_a, d)?,
            coupling_b: coupling_for_transmission(t_b, d)?,
            fictitious_channels: lambda,
            fictitious_transmission,
            ..Self::default()
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 50 {
            return invalid(format!("dimension must be at least 50, got {}", self.dimension));
        }
        if !(self.coupling_a > 0.0 && self.coupling_b > 0.0) || !self.coupling_a.is_finite() || !self.coupling_b.is_finite() {
            return invalid("antenna couplings must be positive");
        }
        if !(0.0..=1.0).contains(&self.fictitious_transmission) {
            return invalid(format!(
                "fictitious-channel transmission must lie in [0, 1], got {}",
                self.fictitious_transmission
            ));
        }
        if self.fictitious_channels + 2 > self.dimension {
            return invalid("more channels than levels");
        }
        if self.realizations == 0 {
            return invalid("at least one realization is required");
        }
        if !(self.band > 0.0 && self.band <= 1.0) {
            return invalid(format!("band half-width must lie in (0, 1], got {}", self.band));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return invalid("frequency step must be positive");
        }
        if !(self.max_lag >= 0.0 && self.max_lag.is_finite()) {
            return invalid("maximum lag must be nonnegative");
        }
        if let Some(w) = self.correlation_window {
            if !(w > 0.0 && w.is_finite()) {
                return invalid("correlation window must be positive");
            }
        }
        Ok(())
    }

    /// Mean level spacing `d` over the analysed band.
    pub fn mean_spacing(&self) -> f64 {
        mean_spacing(self.dimension, self.band)
    }

    pub fn tau_abs(&self) -> f64 {
        self.fictitious_channels as f64 * self.fictitious_transmission
    }

    pub fn is_unitary(&self) -> bool {
        self.tau_abs() == 0.0
    }

    /// Coupling `v^2` of each fictitious channel.
    pub fn fictitious_coupling(&self) -> f64 {
        coupling_for_transmission(self.fictitious_transmission, self.mean_spacing()).unwrap_or(0.0)
    }

    /// Coupling strengths of all channels: the two antennas first, then the
    /// fictitious channels.
    pub fn channel_couplings(&self) -> Vec<f64> {
        let mut v = vec![self.coupling_a, self.coupling_b];
        if !self.is_unitary() {
            v.extend(std::iter::repeat_n(self.fictitious_coupling(), self.fictitious_channels));
        }
        v
    }

    pub fn expected_transmission_a(&self) -> f64 {
        transmission_for_coupling(self.coupling_a, self.mean_spacing())
    }

    pub fn expected_transmission_b(&self) -> f64 {
        transmission_for_coupling(self.coupling_b, self.mean_spacing())
    }

    /// Energies of the band grid, `-band, -band + step d, ...`.
    pub fn energy_grid(&self) -> Vec<f64> {
        let h = self.step * self.mean_spacing();
        let n = (2.0 * self.band / h).floor() as usize + 1;
        (0..n).map(|i| -self.band + i as f64 * h).collect()
    }
}
