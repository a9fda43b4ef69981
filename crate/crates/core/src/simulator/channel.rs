//! Channel gains and transmit-power inversion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NomaError, Result};
use crate::model::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerLevel {
    High,
    Low,
}

/// Transmit power that makes the received power equal the level's target.
pub fn tx_power_for(level: PowerLevel, gain: f64, s: &Scenario) -> Result<f64> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(NomaError::NonPositiveGain(gain));
    }
    let target = match level {
        PowerLevel::High => s.v1(),
        PowerLevel::Low => s.v2(),
    };
    Ok(target / gain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fading {
    /// `|h|^2 = 1`.
    None,
    /// `|h|^2 ~ Exp(1)`.
    Rayleigh,
}

/// Users uniform over a disk of radius `radius` around the access point,
/// gain `l0 * r^-alpha * |h|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub radius: f64,
    pub l0: f64,
    pub alpha: f64,
    pub fading: Fading,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self { radius: 100.0, l0: 1e-3, alpha: 3.0, fading: Fading::Rayleigh }
    }
}

/// One gain draw and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    pub distance: f64,
    pub fading: f64,
    pub gain: f64,
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("radius", self.radius), ("l0", self.l0), ("alpha", self.alpha)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(NomaError::NotPositive { name, value: v });
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GainSample {
        // 1 - U lies in (0, 1], keeping r > 0 and -ln finite
        let distance = self.radius * (1.0 - rng.random::<f64>()).sqrt();
        let fading = match self.fading {
            Fading::None => 1.0,
            Fading::Rayleigh => -(1.0 - rng.random::<f64>()).ln(),
        };
        let gain = self.l0 * distance.powf(-self.alpha) * fading;
        GainSample { distance, fading, gain }
    }
}

/// Distance in units in the last place between two finite doubles of equal sign.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    let (a, b) = (a.to_bits() as i64, b.to_bits() as i64);
    a.abs_diff(b)
}
