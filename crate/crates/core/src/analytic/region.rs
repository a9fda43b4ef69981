//! SINR along the SIC decoding chain and the feasible regions it induces.
//!
//! Region (a) is the set of pairs whose high-power layer decodes in full;
//! region (b) the set whose low-power layer decodes in full (which requires
//! the high layer, if any, to go first). Membership is decided by the SINR
//! inequalities themselves; [`RegionBounds`] gives the same sets in the
//! floor-form bound representation used for summation limits.

use serde::Serialize;

use crate::error::{NomaError, Result};
use crate::model::{CountPair, Scenario};

/// SINR of the `i`-th decoded high-power user when the `i - 1` stronger
/// copies have already been cancelled.
pub fn sinr_high(s: &Scenario, i: usize, pair: CountPair) -> Result<f64> {
    if i == 0 || i > pair.n1 {
        return Err(NomaError::IndexOutOfRange { index: i, count: pair.n1 });
    }
    Ok(s.v1() / (s.v1() * (pair.n1 - i) as f64 + s.v2() * pair.n2 as f64 + 1.0))
}

/// SINR of the `j`-th decoded low-power user once the whole high layer is gone.
pub fn sinr_low(s: &Scenario, j: usize, pair: CountPair) -> Result<f64> {
    if j == 0 || j > pair.n2 {
        return Err(NomaError::IndexOutOfRange { index: j, count: pair.n2 });
    }
    Ok(s.v2() / (s.v2() * (pair.n2 - j) as f64 + 1.0))
}

/// Layer-level decodability of a concurrent-transmission outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecodeFlags {
    pub high_ok: bool,
    pub low_ok: bool,
}

/// Decides both layers from the first-decoded SINR of each. SINR grows along
/// the chain, so the first user of a layer clearing `gamma` means the whole
/// layer does.
pub fn decode_feasibility(s: &Scenario, pair: CountPair) -> DecodeFlags {
    let high_ok = pair.n1 >= 1 && sinr_high(s, 1, pair).is_ok_and(|x| x >= s.gamma());
    let low_ok = pair.n2 >= 1
        && sinr_low(s, 1, pair).is_ok_and(|x| x >= s.gamma())
        && (pair.n1 == 0 || high_ok);
    DecodeFlags { high_ok, low_ok }
}

/// Closed-form upper bounds describing regions (a) and (b).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionBounds {
    m: usize,
    nh_a: usize,
    /// `nl_a[n1 - 1]` for `n1` in `1..=nh_a`.
    nl_a: Vec<usize>,
    nl_b: usize,
    /// `nh_b[n2 - 1]` for `n2` in `1..=nl_b`.
    nh_b: Vec<usize>,
}

/// `min{cap, max{0, x}}` for a real-valued bound, without overflowing the cast.
fn clamp_count(x: f64, cap: usize) -> usize {
    if x <= 0.0 || x.is_nan() {
        0
    } else if x >= cap as f64 {
        cap
    } else {
        x as usize
    }
}

pub fn region_bounds(s: &Scenario) -> RegionBounds {
    let (m, v1, v2, g) = (s.m(), s.v1(), s.v2(), s.gamma());

    let nh_a = clamp_count(((v1 - g) / (v1 * g)).floor() + 1.0, m);
    let nl_a = (1..=nh_a)
        .map(|n1| {
            let x = ((v1 - g * (n1 - 1) as f64 * v1 - g) / (v2 * g)).floor();
            clamp_count(x, m - n1)
        })
        .collect();

    let nl_b = clamp_count(((v2 - g) / (v2 * g)).floor() + 1.0, m);
    let nh_b = (1..=nl_b)
        .map(|n2| {
            let x = ((v1 - g * n2 as f64 * v2 - g) / (v1 * g)).floor() + 1.0;
            clamp_count(x, m - n2)
        })
        .collect();

    RegionBounds { m, nh_a, nl_a, nl_b, nh_b }
}

impl RegionBounds {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest high-power count for which the high layer can decode.
    pub fn nh_a(&self) -> usize {
        self.nh_a
    }

    /// Largest low-power count tolerated by the high layer given `n1`.
    pub fn nl_a(&self, n1: usize) -> Option<usize> {
        n1.checked_sub(1).and_then(|k| self.nl_a.get(k).copied())
    }

    /// Largest low-power count for which the low layer can decode.
    pub fn nl_b(&self) -> usize {
        self.nl_b
    }

    /// Largest high-power count that still lets `n2` low users through.
    pub fn nh_b(&self, n2: usize) -> Option<usize> {
        n2.checked_sub(1).and_then(|k| self.nh_b.get(k).copied())
    }

    pub fn in_region_a(&self, pair: CountPair) -> bool {
        self.nl_a(pair.n1).is_some_and(|max_n2| pair.n2 <= max_n2)
    }

    pub fn in_region_b(&self, pair: CountPair) -> bool {
        self.nh_b(pair.n2).is_some_and(|max_n1| pair.n1 <= max_n1)
    }

    pub fn is_empty(&self) -> bool {
        self.nh_a == 0 && self.nl_b == 0
    }

    /// Pairs of region (a), `n1` ascending then `n2` ascending.
    pub fn region_a(&self) -> impl Iterator<Item = CountPair> + '_ {
        self.nl_a
            .iter()
            .enumerate()
            .flat_map(|(k, &max_n2)| (0..=max_n2).map(move |n2| CountPair::new(k + 1, n2)))
    }

    /// Pairs of region (b), `n2` ascending then `n1` ascending.
    pub fn region_b(&self) -> impl Iterator<Item = CountPair> + '_ {
        self.nh_b
            .iter()
            .enumerate()
            .flat_map(|(k, &max_n1)| (0..=max_n1).map(move |n1| CountPair::new(n1, k + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(m: usize, gamma: f64) -> Scenario {
        Scenario::new(m, 4.0, 1.5, gamma).unwrap()
    }

    #[test]
    fn sinr_high_values() {
        let s = Scenario::default();
        assert_eq!(sinr_high(&s, 1, CountPair::new(1, 0)).unwrap(), 4.0);
        assert!((sinr_high(&s, 1, CountPair::new(2, 0)).unwrap() - 0.8).abs() < 1e-15);
        assert!((sinr_high(&s, 1, CountPair::new(1, 1)).unwrap() - 1.6).abs() < 1e-15);
    }

    #[test]
    fn sinr_low_values() {
        let s = Scenario::default();
        assert_eq!(sinr_low(&s, 1, CountPair::new(0, 1)).unwrap(), 1.5);
        assert!((sinr_low(&s, 1, CountPair::new(0, 2)).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(sinr_low(&s, 2, CountPair::new(0, 2)).unwrap(), 1.5);
    }

    #[test]
    fn sinr_index_out_of_range() {
        let s = Scenario::default();
        let pair = CountPair::new(2, 1);
        assert_eq!(
            sinr_high(&s, 0, pair),
            Err(NomaError::IndexOutOfRange { index: 0, count: 2 })
        );
        assert!(sinr_high(&s, 3, pair).is_err());
        assert!(sinr_low(&s, 2, pair).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let s = Scenario::default();
        let ok = DecodeFlags { high_ok: true, low_ok: true };
        let none = DecodeFlags { high_ok: false, low_ok: false };
        assert_eq!(decode_feasibility(&s, CountPair::new(1, 1)), ok);
        assert_eq!(decode_feasibility(&s, CountPair::new(2, 0)), none);
        assert_eq!(decode_feasibility(&s, CountPair::new(0, 0)), none);
        // low layer blocked by an undecodable high layer
        assert_eq!(decode_feasibility(&s, CountPair::new(2, 1)), none);
    }

    #[test]
    fn bounds_at_defaults() {
        let b = region_bounds(&Scenario::default());
        assert_eq!(b.nh_a(), 1);
        assert_eq!(b.nl_a(1), Some(1));
        assert_eq!(b.nl_b(), 1);
        assert_eq!(b.nh_b(1), Some(1));
        assert_eq!(b.nl_a(2), None);
        assert_eq!(b.nh_b(0), None);
    }

    #[test]
    fn bounds_low_threshold() {
        let b = region_bounds(&scenario(10, 0.3));
        assert_eq!(b.nh_a(), 4);
        assert_eq!(b.nl_b(), 3);
    }

    #[test]
    fn bounds_empty_when_threshold_exceeds_power() {
        let b = region_bounds(&scenario(10, 5.0));
        assert_eq!(b.nh_a(), 0);
        assert_eq!(b.nl_b(), 0);
        assert!(b.is_empty());
        assert_eq!(b.region_a().count() + b.region_b().count(), 0);
    }

    #[test]
    fn bounds_capped_by_user_count() {
        // tiny threshold: the SINR bounds are huge, the user count binds
        let b = region_bounds(&scenario(3, 0.01));
        assert_eq!(b.nh_a(), 3);
        assert_eq!(b.nl_a(3), Some(0));
        assert_eq!(b.nl_b(), 3);
        assert_eq!(b.nh_b(3), Some(0));
    }
}
