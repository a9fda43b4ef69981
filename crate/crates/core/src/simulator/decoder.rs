//! Successive interference cancellation at the access point.

use serde::Serialize;

use crate::analytic::{sinr_high, sinr_low};
use crate::model::{CountPair, Scenario};

/// Result of decoding one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotOutcome {
    pub n1: usize,
    pub n2: usize,
    pub high_decoded: bool,
    pub low_decoded: bool,
    /// Bits per slot per unit bandwidth over all decoded users.
    pub sum_rate: f64,
    /// Number of high-power users decoded, in decoding order.
    pub high_users_decoded: usize,
    /// Number of low-power users decoded, in decoding order.
    pub low_users_decoded: usize,
}

impl SlotOutcome {
    /// Success flag of every transmitter: the `n1` high-power users in
    /// decoding order, then the `n2` low-power ones.
    pub fn per_user_success(&self) -> impl Iterator<Item = bool> + '_ {
        let high = (0..self.n1).map(|i| i < self.high_users_decoded);
        let low = (0..self.n2).map(|j| j < self.low_users_decoded);
        high.chain(low)
    }

    pub fn successes(&self) -> usize {
        self.high_users_decoded + self.low_users_decoded
    }
}

/// Decodes the high layer user by user, then the low layer if the high layer
/// came out clean. Decoding stops at the first user below `gamma`.
pub fn sic_decode(s: &Scenario, n1: usize, n2: usize) -> SlotOutcome {
    let pair = CountPair::new(n1, n2);
    let mut sum_rate = 0.0;

    let mut high_users_decoded = 0;
    for i in 1..=n1 {
        let sinr = sinr_high(s, i, pair).expect("index within layer");
        if sinr < s.gamma() {
            break;
        }
        sum_rate += (1.0 + sinr).log2();
        high_users_decoded = i;
    }
    let high_decoded = n1 > 0 && high_users_decoded == n1;

    let mut low_users_decoded = 0;
    if high_users_decoded == n1 {
        for j in 1..=n2 {
            let sinr = sinr_low(s, j, pair).expect("index within layer");
            if sinr < s.gamma() {
                break;
            }
            sum_rate += (1.0 + sinr).log2();
            low_users_decoded = j;
        }
    }
    let low_decoded = n2 > 0 && low_users_decoded == n2;

    SlotOutcome {
        n1,
        n2,
        high_decoded,
        low_decoded,
        sum_rate,
        high_users_decoded,
        low_users_decoded,
    }
}
