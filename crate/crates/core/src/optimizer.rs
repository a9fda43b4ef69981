//! Throughput maximization over `(tau1, tau2)`.
//!
//! [`coordinate_ascent`] alternates exact-ish one-dimensional maximizations,
//! starting from `tau1 = 0`, until an update gains no more than `epsilon`.
//! [`grid_search_oracle`] scans the whole probability simplex and is used to
//! validate it.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{average_throughput_with, region_bounds, RegionBounds};
use crate::error::{NomaError, Result};
use crate::model::{PowerProfile, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentConfig {
    /// Minimum throughput gain for an update to be accepted.
    pub epsilon: f64,
    pub max_outer_iterations: usize,
    /// Coarse step of the one-dimensional scans.
    pub grid_step: f64,
    /// Each round rescans the incumbent's bracket at a 10x finer step.
    pub refine_rounds: usize,
    /// Starting value of `tau1` for the listing-order run.
    pub initial_tau1: f64,
    /// Also run the alternation from `tau2 = 0` with a `tau1` move first and
    /// keep the better of the two runs.
    pub mirrored_start: bool,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-5,
            max_outer_iterations: 100,
            grid_step: 1e-3,
            refine_rounds: 2,
            initial_tau1: 0.0,
            mirrored_start: true,
        }
    }
}

impl AscentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(NomaError::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_outer_iterations == 0 {
            return Err(NomaError::Config("max_outer_iterations must be at least 1".into()));
        }
        if !(self.grid_step > 0.0 && self.grid_step < 1.0) {
            return Err(NomaError::Config(format!(
                "grid_step must lie in (0, 1), got {}",
                self.grid_step
            )));
        }
        if !(0.0..=1.0).contains(&self.initial_tau1) {
            return Err(NomaError::Config(format!(
                "initial_tau1 must lie in [0, 1], got {}",
                self.initial_tau1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub throughput: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub tau1_star: f64,
    pub tau2_star: f64,
    pub th_star: f64,
    pub outer_iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRecord>,
}

impl OptimizationResult {
    pub fn profile(&self) -> PowerProfile {
        PowerProfile::new(self.tau1_star, self.tau2_star)
            .expect("optimizer keeps tau1 + tau2 within the simplex")
    }
}

/// Maximizes `f` over `[0, width]`: a scan at `step`, then `refine_rounds`
/// rescans of `[x* - step, x* + step]` at a step ten times finer each round.
///
/// Ties keep the smallest abscissa. Returns `(argmax, max)`.
pub fn maximize_1d<F>(f: F, width: f64, step: f64, refine_rounds: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let width = width.max(0.0);
    let mut best = (0.0, f(0.0));
    let scan = |lo: f64, hi: f64, h: f64, best: &mut (f64, f64)| {
        let n = ((hi - lo) / h).ceil() as usize;
        for k in 0..=n {
            let x = (lo + k as f64 * h).min(hi);
            let y = f(x);
            if y > best.1 || (y == best.1 && x < best.0) {
                *best = (x, y);
            }
        }
    };

    scan(0.0, width, step, &mut best);
    let mut h = step;
    for _ in 0..refine_rounds {
        let lo = (best.0 - h).max(0.0);
        let hi = (best.0 + h).min(width);
        h /= 10.0;
        scan(lo, hi, h, &mut best);
    }
    best
}

/// Best `tau2` in `[0, 1 - tau1]` for a fixed `tau1`.
pub fn maximize_over_tau2(s: &Scenario, tau1: f64, cfg: &AscentConfig) -> (f64, f64) {
    maximize_over_tau2_with(s, &region_bounds(s), tau1, cfg)
}

/// Best `tau1` in `[0, 1 - tau2]` for a fixed `tau2`.
pub fn maximize_over_tau1(s: &Scenario, tau2: f64, cfg: &AscentConfig) -> (f64, f64) {
    maximize_over_tau1_with(s, &region_bounds(s), tau2, cfg)
}

fn maximize_over_tau2_with(s: &Scenario, b: &RegionBounds, tau1: f64, cfg: &AscentConfig) -> (f64, f64) {
    let width = 1.0 - tau1;
    let objective = |tau2: f64| throughput_at(s, b, tau1, tau2.min(width));
    maximize_1d(objective, width, cfg.grid_step, cfg.refine_rounds)
}

fn maximize_over_tau1_with(s: &Scenario, b: &RegionBounds, tau2: f64, cfg: &AscentConfig) -> (f64, f64) {
    let width = 1.0 - tau2;
    let objective = |tau1: f64| throughput_at(s, b, tau1.min(width), tau2);
    maximize_1d(objective, width, cfg.grid_step, cfg.refine_rounds)
}

fn throughput_at(s: &Scenario, b: &RegionBounds, tau1: f64, tau2: f64) -> f64 {
    match PowerProfile::new(tau1, tau2) {
        Ok(prof) => average_throughput_with(s, &prof, b),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Coordinate move of the ascent: searches `tau2` over all of `[0, 1]`,
/// pulling `tau1` back to `1 - tau2` where the simplex constraint binds.
/// Identical to [`maximize_over_tau2`] whenever the maximizer leaves
/// `tau1` untouched. Returns `(tau1, tau2, th)`.
fn ascent_step_tau2(s: &Scenario, b: &RegionBounds, tau1: f64, cfg: &AscentConfig) -> (f64, f64, f64) {
    let objective = |tau2: f64| throughput_at(s, b, tau1.min(1.0 - tau2), tau2);
    let (tau2, th) = maximize_1d(objective, 1.0, cfg.grid_step, cfg.refine_rounds);
    (tau1.min(1.0 - tau2), tau2, th)
}

fn ascent_step_tau1(s: &Scenario, b: &RegionBounds, tau2: f64, cfg: &AscentConfig) -> (f64, f64, f64) {
    let objective = |tau1: f64| throughput_at(s, b, tau1, tau2.min(1.0 - tau1));
    let (tau1, th) = maximize_1d(objective, 1.0, cfg.grid_step, cfg.refine_rounds);
    (tau1, tau2.min(1.0 - tau1), th)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FirstMove {
    Tau2,
    Tau1,
}

/// Alternating maximization over `(tau1, tau2)`.
///
/// The listing-order run starts from `tau1 = cfg.initial_tau1`, `tau2 = 0`,
/// throughput 0, and each outer iteration tries a `tau2` update then a `tau1`
/// update; the first attempt that gains no more than `epsilon` stops the run
/// with `converged = true`. A move that would leave the simplex shrinks the
/// other coordinate instead of being cut off, so a boundary iterate such as
/// `(0, 1)` can still shift mass between the two modes.
///
/// A run that opens with a `tau2` move stalls at zero whenever low power alone
/// never decodes (`v2 < gamma`), and a run can park on either axis when the
/// two modes are nearly interchangeable. With `cfg.mirrored_start` the same
/// alternation is repeated from `tau2 = 0` opening with a `tau1` move, and
/// the better run is returned (listing order wins ties).
pub fn coordinate_ascent(s: &Scenario, cfg: &AscentConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let bounds = region_bounds(s);
    let listing = ascent_run(s, &bounds, cfg, FirstMove::Tau2);
    if !cfg.mirrored_start {
        return Ok(listing);
    }
    let mirrored = ascent_run(s, &bounds, cfg, FirstMove::Tau1);
    Ok(if mirrored.th_star > listing.th_star { mirrored } else { listing })
}

fn ascent_run(s: &Scenario, bounds: &RegionBounds, cfg: &AscentConfig, first: FirstMove) -> OptimizationResult {
    let mut tau1 = if first == FirstMove::Tau2 { cfg.initial_tau1 } else { 0.0 };
    let mut tau2 = 0.0;
    let mut th = 0.0;
    let mut trace = vec![TraceRecord { iteration: 0, tau1, tau2, throughput: th }];
    let mut converged = false;
    let mut outer = 0;
    let moves = match first {
        FirstMove::Tau2 => [FirstMove::Tau2, FirstMove::Tau1],
        FirstMove::Tau1 => [FirstMove::Tau1, FirstMove::Tau2],
    };

    'outer: while outer < cfg.max_outer_iterations {
        outer += 1;
        for mv in moves {
            let (t1, t2, value) = match mv {
                FirstMove::Tau2 => ascent_step_tau2(s, bounds, tau1, cfg),
                FirstMove::Tau1 => ascent_step_tau1(s, bounds, tau2, cfg),
            };
            if value - th > cfg.epsilon {
                (tau1, tau2, th) = (t1, t2, value);
                trace.push(TraceRecord { iteration: outer, tau1, tau2, throughput: th });
            } else {
                converged = true;
                break 'outer;
            }
        }
    }

    // equals `th` unless no update was accepted from a nonzero starting tau1
    let th_star = throughput_at(s, bounds, tau1, tau2);
    OptimizationResult {
        tau1_star: tau1,
        tau2_star: tau2,
        th_star,
        outer_iterations: outer,
        converged,
        trace,
    }
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    i: usize,
    j: usize,
    th: f64,
}

/// Total order: higher throughput first, then smaller `tau1`, then smaller
/// `tau2`. Makes the parallel reduction independent of evaluation order.
fn better(a: GridPoint, b: GridPoint) -> GridPoint {
    match a.th.partial_cmp(&b.th).unwrap_or(Ordering::Equal) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if (a.i, a.j) <= (b.i, b.j) {
                a
            } else {
                b
            }
        }
    }
}

/// Exhaustive search over `{(i step, j step) : i + j <= 1/step}`.
pub fn grid_search_oracle(s: &Scenario, step: f64) -> Result<OptimizationResult> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(NomaError::Config(format!("grid step must lie in (0, 0.1], got {step}")));
    }
    let bounds = region_bounds(s);
    let n = (1.0 / step + 1e-9).floor() as usize;
    let coords = |i: usize, j: usize| {
        let tau1 = (i as f64 * step).min(1.0);
        let tau2 = (j as f64 * step).min(1.0 - tau1);
        (tau1, tau2)
    };

    let best = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| (0..=n - i).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (tau1, tau2) = coords(i, j);
            GridPoint { i, j, th: throughput_at(s, &bounds, tau1, tau2) }
        })
        .reduce(|| GridPoint { i: 0, j: 0, th: f64::NEG_INFINITY }, better);

    let (tau1, tau2) = coords(best.i, best.j);
    Ok(OptimizationResult {
        tau1_star: tau1,
        tau2_star: tau2,
        th_star: best.th,
        outer_iterations: 0,
        converged: true,
        trace: vec![TraceRecord { iteration: 0, tau1, tau2, throughput: best.th }],
    })
}
