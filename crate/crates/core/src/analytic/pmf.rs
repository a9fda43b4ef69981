//! Joint distribution of the high/low transmitter counts in a slot.

use std::sync::OnceLock;

use crate::model::{CountPair, PowerProfile, Scenario};

const TABLE_LEN: usize = 1025;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..TABLE_LEN {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    match table.get(n) {
        Some(&v) => v,
        None => {
            let last = TABLE_LEN - 1;
            table[last] + (TABLE_LEN..=n).map(|k| (k as f64).ln()).sum::<f64>()
        }
    }
}

/// `k * ln(p)` with the convention `0 * ln(0) = 0`.
fn ln_power(p: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.ln()
    }
}

/// Probability that exactly `n1` of the scenario's users pick high power and
/// `n2` pick low power in a slot.
pub fn joint_pmf(s: &Scenario, prof: &PowerProfile, pair: CountPair) -> f64 {
    count_pmf(s.m(), prof, pair)
}

/// Same as [`joint_pmf`] over an arbitrary population of `m` users (`m = 0`
/// allowed). Zero when `n1 + n2 > m`.
///
/// The multinomial coefficient `C(m, n1+n2) C(n1+n2, n1)` is evaluated as
/// `m! / (n1! n2! (m-n1-n2)!)` in log space and exponentiated once.
pub fn count_pmf(m: usize, prof: &PowerProfile, pair: CountPair) -> f64 {
    let n = pair.total();
    if n > m {
        return 0.0;
    }
    let idle = m - n;
    let ln_coef =
        ln_factorial(m) - ln_factorial(pair.n1) - ln_factorial(pair.n2) - ln_factorial(idle);
    let ln_p = ln_coef
        + ln_power(prof.tau1(), pair.n1)
        + ln_power(prof.tau2(), pair.n2)
        + ln_power(prof.idle(), idle);
    // ln(0) = -inf exponentiates to an exact zero
    ln_p.exp()
}
