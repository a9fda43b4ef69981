//! Slot-level Monte Carlo simulation of p-persistent NOMA ALOHA.
//!
//! Every slot each of the `m` users independently stays idle, transmits at
//! high power or transmits at low power; the counts `(n1, n2)` go through
//! [`sic_decode`]. Replication `r` draws from ChaCha8 stream `r` of the
//! configured seed, so replications are independent of each other and of the
//! thread that runs them.

mod channel;
mod decoder;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use channel::{tx_power_for, ulp_distance, ChannelModel, Fading, GainSample, PowerLevel};
pub use decoder::{sic_decode, SlotOutcome};

use crate::error::{NomaError, Result};
use crate::model::{PowerProfile, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Slots per replication.
    pub slots: u64,
    pub seed: u64,
    pub replications: u32,
    /// When set, every transmitter draws a channel gain and inverts it.
    /// Decoding does not depend on it.
    pub channel: Option<ChannelModel>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { slots: 1_000_000, seed: 1, replications: 10, channel: None }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slots == 0 {
            return Err(NomaError::Config("slots must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(NomaError::Config("replications must be at least 1".into()));
        }
        if let Some(ch) = &self.channel {
            ch.validate()?;
        }
        Ok(())
    }
}

/// Monte Carlo estimates. Standard errors are the sample standard deviation
/// of the per-replication means over `sqrt(replications)`; with a single
/// replication they fall back to the per-slot standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    /// Tagged-user (user 0) success frequency.
    pub p_success_hat: f64,
    pub stderr_p: f64,
    /// Mean number of successful users per slot divided by `m`.
    pub p_success_all_hat: f64,
    pub stderr_p_all: f64,
    /// Mean decoded sum rate per slot.
    pub throughput_hat: f64,
    pub stderr_th: f64,
    pub slots_run: u64,
    pub replications: u32,
    /// Largest deviation of a reconstructed received power from its target.
    pub max_inversion_ulps: u64,
    #[serde(skip)]
    pair_counts: Vec<u64>,
    #[serde(skip)]
    m: usize,
}

impl SimStats {
    /// Number of slots that saw exactly `(n1, n2)` transmitters.
    pub fn pair_count(&self, n1: usize, n2: usize) -> u64 {
        if n1 + n2 > self.m {
            return 0;
        }
        self.pair_counts[n1 * (self.m + 1) + n2]
    }
}

/// Per-replication accumulators.
#[derive(Debug, Clone)]
struct Tally {
    slots: u64,
    tagged: u64,
    pair_counts: Vec<u64>,
    /// Decoded sum rate and success count of each `(n1, n2)` cell; both are
    /// functions of the cell alone.
    cell_rate: Vec<f64>,
    cell_successes: Vec<u64>,
    max_ulps: u64,
}

impl Tally {
    fn new(m: usize) -> Self {
        Self {
            slots: 0,
            tagged: 0,
            pair_counts: vec![0; (m + 1) * (m + 1)],
            cell_rate: vec![0.0; (m + 1) * (m + 1)],
            cell_successes: vec![0; (m + 1) * (m + 1)],
            max_ulps: 0,
        }
    }

    /// Slot-weighted mean and second moment of `value` over the cells.
    fn moments(&self, value: impl Fn(usize) -> f64) -> (f64, f64) {
        let n = self.slots as f64;
        self.pair_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold((0.0, 0.0), |(m1, m2), (k, &c)| {
                let w = c as f64 / n;
                let x = value(k);
                (m1 + w * x, m2 + w * x * x)
            })
    }
}

#[derive(Clone, Copy)]
enum Action {
    Idle,
    Transmit(PowerLevel),
}

fn run_replication<F>(
    s: &Scenario,
    prof: &PowerProfile,
    cfg: &SimConfig,
    replication: u32,
    mut observe: F,
) -> Tally
where
    F: FnMut(u64, &SlotOutcome),
{
    let m = s.m();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::from(replication));
    let (t1, t12) = (prof.tau1(), prof.tau1() + prof.tau2());
    let mut tally = Tally::new(m);

    for slot in 0..cfg.slots {
        let (mut n1, mut n2) = (0, 0);
        let mut tagged = Action::Idle;
        for user in 0..m {
            let u: f64 = rng.random();
            let action = if u < t1 {
                n1 += 1;
                Action::Transmit(PowerLevel::High)
            } else if u < t12 {
                n2 += 1;
                Action::Transmit(PowerLevel::Low)
            } else {
                Action::Idle
            };
            if let (Some(ch), Action::Transmit(level)) = (&cfg.channel, action) {
                let g = ch.sample(&mut rng).gain;
                let target = match level {
                    PowerLevel::High => s.v1(),
                    PowerLevel::Low => s.v2(),
                };
                let received = tx_power_for(level, g, s).expect("sampled gains are positive") * g;
                tally.max_ulps = tally.max_ulps.max(ulp_distance(received, target));
            }
            if user == 0 {
                tagged = action;
            }
        }

        let outcome = sic_decode(s, n1, n2);
        let tagged_ok = match tagged {
            Action::Idle => false,
            Action::Transmit(PowerLevel::High) => outcome.high_decoded,
            Action::Transmit(PowerLevel::Low) => outcome.low_decoded,
        };
        let cell = n1 * (m + 1) + n2;
        tally.slots += 1;
        tally.tagged += u64::from(tagged_ok);
        tally.pair_counts[cell] += 1;
        tally.cell_rate[cell] = outcome.sum_rate;
        tally.cell_successes[cell] = outcome.successes() as u64;
        observe(slot, &outcome);
    }
    tally
}

/// Mean of the replication means and its standard error.
fn mean_and_stderr(means: &[f64], fallback_var: f64, slots: u64) -> (f64, f64) {
    let r = means.len() as f64;
    let mean = means.iter().sum::<f64>() / r;
    let se = if means.len() > 1 {
        let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
        (var / r).sqrt()
    } else {
        (fallback_var.max(0.0) / slots as f64).sqrt()
    };
    (mean, se)
}

fn aggregate(s: &Scenario, cfg: &SimConfig, tallies: Vec<Tally>) -> SimStats {
    let m = s.m();
    let n = cfg.slots as f64;
    let mf = m as f64;
    let tagged: Vec<f64> = tallies.iter().map(|t| t.tagged as f64 / n).collect();
    let all: Vec<(f64, f64)> = tallies
        .iter()
        .map(|t| t.moments(|k| t.cell_successes[k] as f64 / mf))
        .collect();
    let rate: Vec<(f64, f64)> = tallies.iter().map(|t| t.moments(|k| t.cell_rate[k])).collect();

    // per-slot variances, used only with a single replication
    let var_tagged = tagged[0] * (1.0 - tagged[0]);
    let var_all = all[0].1 - all[0].0 * all[0].0;
    let var_rate = rate[0].1 - rate[0].0 * rate[0].0;

    let firsts = |v: &[(f64, f64)]| v.iter().map(|x| x.0).collect::<Vec<_>>();
    let (p_success_hat, stderr_p) = mean_and_stderr(&tagged, var_tagged, cfg.slots);
    let (p_success_all_hat, stderr_p_all) = mean_and_stderr(&firsts(&all), var_all, cfg.slots);
    let (throughput_hat, stderr_th) = mean_and_stderr(&firsts(&rate), var_rate, cfg.slots);

    let mut pair_counts = vec![0; (m + 1) * (m + 1)];
    for t in &tallies {
        for (acc, c) in pair_counts.iter_mut().zip(&t.pair_counts) {
            *acc += c;
        }
    }

    SimStats {
        p_success_hat,
        stderr_p,
        p_success_all_hat,
        stderr_p_all,
        throughput_hat,
        stderr_th,
        slots_run: tallies.iter().map(|t| t.slots).sum(),
        replications: cfg.replications,
        max_inversion_ulps: tallies.iter().map(|t| t.max_ulps).max().unwrap_or(0),
        pair_counts,
        m,
    }
}

/// Runs all replications in parallel and aggregates them in replication order.
pub fn run_simulation(s: &Scenario, prof: &PowerProfile, cfg: &SimConfig) -> Result<SimStats> {
    cfg.validate()?;
    let tallies: Vec<Tally> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| run_replication(s, prof, cfg, r, |_, _| {}))
        .collect();
    Ok(aggregate(s, cfg, tallies))
}

/// Header of the per-slot trace.
pub const TRACE_HEADER: &str = "replication,slot,n1,n2,high_decoded,low_decoded,sum_rate";

/// Runs the replications sequentially and writes one CSV record per slot.
/// Produces the same statistics as [`run_simulation`].
pub fn run_simulation_traced<W: Write>(
    s: &Scenario,
    prof: &PowerProfile,
    cfg: &SimConfig,
    out: &mut W,
) -> Result<SimStats> {
    cfg.validate()?;
    writeln!(out, "{TRACE_HEADER}").map_err(io_error)?;
    let mut tallies = Vec::with_capacity(cfg.replications as usize);
    for r in 0..cfg.replications {
        let mut failure = None;
        let tally = run_replication(s, prof, cfg, r, |slot, o| {
            if failure.is_none() {
                let res = writeln!(
                    out,
                    "{r},{slot},{},{},{},{},{:.16e}",
                    o.n1, o.n2, o.high_decoded, o.low_decoded, o.sum_rate
                );
                failure = res.err();
            }
        });
        if let Some(e) = failure {
            return Err(io_error(e));
        }
        tallies.push(tally);
    }
    Ok(aggregate(s, cfg, tallies))
}

fn io_error(e: std::io::Error) -> NomaError {
    NomaError::Io(e.to_string())
}
