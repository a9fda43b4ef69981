//! Static network parameters and the per-slot decision variables.
//!
//! All powers are expressed in units of the receiver noise power, so `v1` and
//! `v2` are received SNRs and the noise term in every SINR denominator is 1.

use serde::{Deserialize, Serialize};

use crate::error::{NomaError, Result};

/// Network parameters: `m` contending users, two received power targets and
/// the SINR decoding threshold (linear scale).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    m: usize,
    v1: f64,
    v2: f64,
    gamma: f64,
}

impl Scenario {
    pub const DEFAULT_M: usize = 10;
    pub const DEFAULT_V1: f64 = 4.0;
    pub const DEFAULT_V2: f64 = 1.5;
    pub const DEFAULT_GAMMA: f64 = 1.5;

    pub fn new(m: usize, v1: f64, v2: f64, gamma: f64) -> Result<Self> {
        if m == 0 {
            return Err(NomaError::NoUsers);
        }
        positive("v1", v1)?;
        positive("v2", v2)?;
        positive("gamma", gamma)?;
        if v1 <= v2 {
            return Err(NomaError::PowerOrder { v1, v2 });
        }
        Ok(Self { m, v1, v2, gamma })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_m(self, m: usize) -> Result<Self> {
        Self::new(m, self.v1, self.v2, self.gamma)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.m, self.v1, self.v2, gamma)
    }

    /// Builds a count pair checked against this scenario's user count.
    pub fn pair(&self, n1: usize, n2: usize) -> Result<CountPair> {
        if n1 + n2 > self.m {
            return Err(NomaError::CountExceedsUsers { n1, n2, m: self.m });
        }
        Ok(CountPair { n1, n2 })
    }

    /// Every `(n1, n2)` with `n1 + n2 <= m`, ordered by `n1` then `n2`.
    pub fn pairs(&self) -> impl Iterator<Item = CountPair> + '_ {
        let m = self.m;
        (0..=m).flat_map(move |n1| (0..=m - n1).map(move |n2| CountPair { n1, n2 }))
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            m: Self::DEFAULT_M,
            v1: Self::DEFAULT_V1,
            v2: Self::DEFAULT_V2,
            gamma: Self::DEFAULT_GAMMA,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(NomaError::NotPositive { name, value })
    }
}

/// Per-slot probabilities of transmitting in high (`tau1`) and low (`tau2`)
/// power mode. The total access probability is `tau1 + tau2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    tau1: f64,
    tau2: f64,
}

impl PowerProfile {
    pub fn new(tau1: f64, tau2: f64) -> Result<Self> {
        probability("tau1", tau1)?;
        probability("tau2", tau2)?;
        if tau1 + tau2 > 1.0 {
            return Err(NomaError::ProbabilitySum { tau1, tau2 });
        }
        Ok(Self { tau1, tau2 })
    }

    /// Conventional single-power ALOHA: everybody who transmits uses high power.
    pub fn high_only(p: f64) -> Result<Self> {
        Self::new(p, 0.0)
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn tau2(&self) -> f64 {
        self.tau2
    }

    /// Probability that a user stays silent in a slot.
    pub fn idle(&self) -> f64 {
        (1.0 - self.tau1 - self.tau2).max(0.0)
    }
}

fn probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(NomaError::ProbabilityRange { name, value })
    }
}

/// Number of concurrent high-power (`n1`) and low-power (`n2`) transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountPair {
    pub n1: usize,
    pub n2: usize,
}

impl CountPair {
    pub const fn new(n1: usize, n2: usize) -> Self {
        Self { n1, n2 }
    }

    pub const fn total(&self) -> usize {
        self.n1 + self.n2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_validation() {
        assert_eq!(Scenario::new(0, 4.0, 1.5, 1.5), Err(NomaError::NoUsers));
        assert!(matches!(
            Scenario::new(10, 1.5, 1.5, 1.5),
            Err(NomaError::PowerOrder { .. })
        ));
        assert!(matches!(
            Scenario::new(10, 4.0, 0.0, 1.5),
            Err(NomaError::NotPositive { name: "v2", .. })
        ));
        assert!(matches!(
            Scenario::new(10, 4.0, 1.5, f64::NAN),
            Err(NomaError::NotPositive { name: "gamma", .. })
        ));
        assert_eq!(Scenario::new(10, 4.0, 1.5, 1.5).unwrap(), Scenario::default());
    }

    #[test]
    fn profile_validation() {
        assert!(PowerProfile::new(0.0, 0.0).is_ok());
        assert!(PowerProfile::new(1.0, 0.0).is_ok());
        assert!(PowerProfile::new(0.3, 0.7).is_ok());
        assert!(matches!(
            PowerProfile::new(-0.1, 0.0),
            Err(NomaError::ProbabilityRange { name: "tau1", .. })
        ));
        assert!(matches!(
            PowerProfile::new(0.6, 0.5),
            Err(NomaError::ProbabilitySum { .. })
        ));
        assert_eq!(PowerProfile::new(1.0, 0.0).unwrap().idle(), 0.0);
    }

    #[test]
    fn pair_enumeration_covers_simplex() {
        let s = Scenario::default().with_m(3).unwrap();
        let pairs: Vec<_> = s.pairs().collect();
        assert_eq!(pairs.len(), 10);
        assert!(pairs.iter().all(|p| p.total() <= 3));
        assert!(s.pair(2, 2).is_err());
    }
}
