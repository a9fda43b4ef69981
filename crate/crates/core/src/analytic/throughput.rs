//! Success probability of a typical user and long-term average throughput.

use crate::analytic::pmf::{count_pmf, joint_pmf};
use crate::analytic::region::{region_bounds, RegionBounds};
use crate::error::{NomaError, Result};
use crate::model::{CountPair, PowerProfile, Scenario};

/// Probability that a tagged user transmits and is decoded in a slot.
///
/// Conditioned on the tagged user's own mode, the other `m - 1` users must
/// land the slot inside region (a) (tagged user high) or region (b) (tagged
/// user low).
pub fn success_probability(s: &Scenario, prof: &PowerProfile) -> f64 {
    success_probability_with(s, prof, &region_bounds(s))
}

pub fn success_probability_with(s: &Scenario, prof: &PowerProfile, bounds: &RegionBounds) -> f64 {
    let others = s.m() - 1;
    let high: f64 = bounds
        .region_a()
        .map(|p| count_pmf(others, prof, CountPair::new(p.n1 - 1, p.n2)))
        .sum();
    let low: f64 = bounds
        .region_b()
        .map(|p| count_pmf(others, prof, CountPair::new(p.n1, p.n2 - 1)))
        .sum();
    prof.tau1() * high + prof.tau2() * low
}

/// Sum rate of the high layer for a pair in region (a).
pub fn cond_sum_rate_high(s: &Scenario, pair: CountPair) -> Result<f64> {
    if !region_bounds(s).in_region_a(pair) {
        return Err(NomaError::OutsideRegion { region: 'a', n1: pair.n1, n2: pair.n2 });
    }
    Ok(high_layer_rate(s, pair))
}

/// Sum rate of the low layer for a pair in region (b).
pub fn cond_sum_rate_low(s: &Scenario, pair: CountPair) -> Result<f64> {
    if !region_bounds(s).in_region_b(pair) {
        return Err(NomaError::OutsideRegion { region: 'b', n1: pair.n1, n2: pair.n2 });
    }
    Ok(low_layer_rate(s, pair.n2))
}

/// `sum_{i=1..n1} log2(1 + v1 / ((i-1) v1 + n2 v2 + 1))`, no region check.
pub(crate) fn high_layer_rate(s: &Scenario, pair: CountPair) -> f64 {
    let residual = s.v2() * pair.n2 as f64 + 1.0;
    (0..pair.n1)
        .map(|k| (1.0 + s.v1() / (k as f64 * s.v1() + residual)).log2())
        .sum()
}

/// `sum_{j=1..n2} log2(1 + v2 / ((j-1) v2 + 1))`, no region check.
pub(crate) fn low_layer_rate(s: &Scenario, n2: usize) -> f64 {
    (0..n2)
        .map(|k| (1.0 + s.v2() / (k as f64 * s.v2() + 1.0)).log2())
        .sum()
}

/// Long-term average system throughput in bits per slot per unit bandwidth.
///
/// The high-layer rate counts on every pair of region (a), whether or not the
/// low layer also decodes; the low-layer rate counts on region (b) only.
pub fn average_throughput(s: &Scenario, prof: &PowerProfile) -> f64 {
    average_throughput_with(s, prof, &region_bounds(s))
}

pub fn average_throughput_with(s: &Scenario, prof: &PowerProfile, bounds: &RegionBounds) -> f64 {
    let high: f64 = bounds
        .region_a()
        .map(|p| high_layer_rate(s, p) * joint_pmf(s, prof, p))
        .sum();
    let low: f64 = bounds
        .region_b()
        .map(|p| low_layer_rate(s, p.n2) * joint_pmf(s, prof, p))
        .sum();
    high + low
}
