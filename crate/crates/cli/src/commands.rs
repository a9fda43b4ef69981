use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use noma_core::analytic::{average_throughput, baseline_optimum, baseline_success, baseline_throughput};
use noma_core::analytic::{decode_feasibility, region_bounds, success_probability};
use noma_core::optimizer::{coordinate_ascent, grid_search_oracle, AscentConfig, OptimizationResult};
use noma_core::simulator::{run_simulation, run_simulation_traced, ChannelModel, SimConfig, SimStats};
use noma_core::{PowerProfile, Scenario};
use rayon::prelude::*;

use crate::config::{Axis, ExperimentConfig, RawConfig};
use crate::error::{ensure, CliError};
use crate::output::{Cell, Table};

/// Two-level power NOMA over p-persistent slotted ALOHA.
#[derive(Debug, Parser)]
#[command(name = "noma-aloha", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decodability of every (n1, n2) count pair, plus the region bounds.
    Region(RegionArgs),
    /// Success probability and average throughput for one power profile.
    Analyze(AnalyzeArgs),
    /// Throughput-maximizing power profile.
    Optimize(OptimizeArgs),
    /// Monte Carlo estimates next to the closed-form values.
    Simulate(SimulateArgs),
    /// Closed-form (and optionally simulated / optimized) values along one axis.
    Sweep(SweepArgs),
}

impl Command {
    pub fn raw_config(&self) -> &RawConfig {
        match self {
            Command::Region(a) => &a.cfg,
            Command::Analyze(a) => &a.cfg,
            Command::Optimize(a) => &a.cfg,
            Command::Simulate(a) => &a.cfg,
            Command::Sweep(a) => &a.cfg,
        }
    }
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub cfg: RawConfig,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub cfg: RawConfig,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub cfg: RawConfig,
    /// Also report the exhaustive grid-search optimum.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 0.01)]
    pub oracle_step: f64,
    /// Also report the single-power ALOHA optimum.
    #[arg(long)]
    pub baseline: bool,
    /// Emit the ascent trace instead of the summary rows.
    #[arg(long)]
    pub trace: bool,
    /// Stop once an outer iteration gains less than this.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Run only the start at tau1 = 0 with a tau2 move first.
    #[arg(long)]
    pub single_start: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub cfg: RawConfig,
    /// Write one CSV record per simulated slot here.
    #[arg(long, value_name = "PATH")]
    pub trace_out: Option<PathBuf>,
    /// Draw path-loss and fading gains and invert them per transmitter.
    #[arg(long)]
    pub channel: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub cfg: RawConfig,
    /// Add Monte Carlo columns at every point.
    #[arg(long)]
    pub simulate: bool,
    /// Add the ascent optimum at every point.
    #[arg(long)]
    pub optimize: bool,
}

/// A result table plus free-form lines (shown above the table in text
/// output, on stderr otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report { table, notes: Vec::new() }
    }
}

pub fn execute(cmd: &Command, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match cmd {
        Command::Region(_) => region(cfg),
        Command::Analyze(_) => analyze(cfg),
        Command::Optimize(a) => optimize(cfg, a),
        Command::Simulate(a) => simulate(cfg, a),
        Command::Sweep(a) => sweep(cfg, a),
    }
}

fn region(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let s = &cfg.scenario;
    let b = region_bounds(s);
    let mut t = Table::new(["n1", "n2", "high_ok", "low_ok"]);
    for pair in s.pairs() {
        let f = decode_feasibility(s, pair);
        t.push(vec![pair.n1.into(), pair.n2.into(), f.high_ok.into(), f.low_ok.into()]);
    }
    let list = |v: Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let nl_a: Vec<usize> = (1..=b.nh_a()).filter_map(|n1| b.nl_a(n1)).collect();
    let nh_b: Vec<usize> = (1..=b.nl_b()).filter_map(|n2| b.nh_b(n2)).collect();
    let notes = vec![
        format!("nh_a = {}", b.nh_a()),
        format!("nl_a(n1 = 1..{}) = [{}]", b.nh_a(), list(nl_a)),
        format!("nl_b = {}", b.nl_b()),
        format!("nh_b(n2 = 1..{}) = [{}]", b.nl_b(), list(nh_b)),
    ];
    Ok(Report { table: t, notes })
}

fn check_point(s: &Scenario, p: &PowerProfile, ps: f64, th: f64) -> Result<(), CliError> {
    ensure(ps.is_finite() && ps >= 0.0 && ps <= p.tau1() + p.tau2() + 1e-12, || {
        format!("success probability {ps} outside [0, tau1 + tau2] for {s:?} {p:?}")
    })?;
    ensure(th.is_finite() && th >= 0.0, || format!("throughput {th} is not a finite non-negative value"))
}

fn analyze(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let s = &cfg.scenario;
    let p = cfg.profile()?;
    let ps = success_probability(s, &p);
    let th = average_throughput(s, &p);
    check_point(s, &p, ps, th)?;
    let mut t = Table::new(["m", "v1", "v2", "gamma", "tau1", "tau2", "p_success", "th_avg"]);
    t.push(vec![
        s.m().into(),
        s.v1().into(),
        s.v2().into(),
        s.gamma().into(),
        p.tau1().into(),
        p.tau2().into(),
        ps.into(),
        th.into(),
    ]);
    Ok(t.into())
}

fn ascent_config(a: &OptimizeArgs) -> AscentConfig {
    let mut c = AscentConfig::default();
    if let Some(e) = a.epsilon {
        c.epsilon = e;
    }
    if let Some(n) = a.max_iterations {
        c.max_outer_iterations = n;
    }
    c.mirrored_start = !a.single_start;
    c
}

fn check_optimum(s: &Scenario, r: &OptimizationResult) -> Result<(), CliError> {
    ensure(r.tau1_star >= 0.0 && r.tau2_star >= 0.0 && r.tau1_star + r.tau2_star <= 1.0 + 1e-12, || {
        format!("optimum ({}, {}) leaves the probability simplex", r.tau1_star, r.tau2_star)
    })?;
    let again = average_throughput(s, &r.profile());
    ensure(r.th_star.is_finite() && (again - r.th_star).abs() <= 1e-9, || {
        format!("reported optimum {} disagrees with re-evaluated throughput {again}", r.th_star)
    })
}

fn optimize(cfg: &ExperimentConfig, a: &OptimizeArgs) -> Result<Report, CliError> {
    let s = &cfg.scenario;
    let ac = ascent_config(a);
    ac.validate()?;
    let ascent = coordinate_ascent(s, &ac)?;
    check_optimum(s, &ascent)?;

    if a.trace {
        let mut t = Table::new(["iteration", "tau1", "tau2", "throughput"]);
        for r in &ascent.trace {
            t.push(vec![r.iteration.into(), r.tau1.into(), r.tau2.into(), r.throughput.into()]);
        }
        return Ok(t.into());
    }

    let mut t = Table::new(["method", "tau1", "tau2", "throughput", "outer_iterations", "converged"]);
    t.push(vec![
        "coordinate_ascent".into(),
        ascent.tau1_star.into(),
        ascent.tau2_star.into(),
        ascent.th_star.into(),
        ascent.outer_iterations.into(),
        ascent.converged.into(),
    ]);
    if a.oracle {
        let g = grid_search_oracle(s, a.oracle_step)?;
        check_optimum(s, &g)?;
        t.push(vec![
            "grid_oracle".into(),
            g.tau1_star.into(),
            g.tau2_star.into(),
            g.th_star.into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    if a.baseline {
        let (p, th) = baseline_optimum(s);
        ensure(th.is_finite() && th >= 0.0, || format!("baseline throughput {th} invalid"))?;
        t.push(vec!["aloha_baseline".into(), p.into(), 0.0.into(), th.into(), Cell::Empty, Cell::Empty]);
    }
    Ok(t.into())
}

fn sim_config(cfg: &ExperimentConfig, channel: bool) -> SimConfig {
    SimConfig { channel: channel.then(ChannelModel::default), ..cfg.sim }
}

fn check_stats(cfg: &SimConfig, st: &SimStats) -> Result<(), CliError> {
    let probs = [st.p_success_hat, st.p_success_all_hat];
    ensure(probs.iter().all(|p| (0.0..=1.0).contains(p)), || format!("success estimate outside [0, 1]: {probs:?}"))?;
    let errs = [st.stderr_p, st.stderr_p_all, st.stderr_th, st.throughput_hat];
    ensure(errs.iter().all(|e| e.is_finite() && *e >= 0.0), || format!("invalid estimate or standard error: {errs:?}"))?;
    ensure(st.slots_run == cfg.slots * cfg.replications as u64, || {
        format!("ran {} slots, expected {}", st.slots_run, cfg.slots * cfg.replications as u64)
    })
}

fn ratio(delta: f64, se: f64) -> f64 {
    if delta == 0.0 {
        0.0
    } else {
        delta / se
    }
}

fn simulate(cfg: &ExperimentConfig, a: &SimulateArgs) -> Result<Report, CliError> {
    let s = &cfg.scenario;
    let p = cfg.profile()?;
    let sc = sim_config(cfg, a.channel);
    let stats = match &a.trace_out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            let st = run_simulation_traced(s, &p, &sc, &mut w)?;
            std::io::Write::flush(&mut w)?;
            st
        }
        None => run_simulation(s, &p, &sc)?,
    };
    check_stats(&sc, &stats)?;

    let ps = success_probability(s, &p);
    let th = average_throughput(s, &p);
    check_point(s, &p, ps, th)?;

    let mut t = Table::new(["metric", "simulated", "stderr", "analytic", "delta", "delta_over_stderr"]);
    for (name, sim, se, exact) in [
        ("p_success", stats.p_success_hat, stats.stderr_p, ps),
        ("p_success_all_users", stats.p_success_all_hat, stats.stderr_p_all, ps),
        ("throughput", stats.throughput_hat, stats.stderr_th, th),
    ] {
        let delta = sim - exact;
        t.push(vec![name.into(), sim.into(), se.into(), exact.into(), delta.into(), ratio(delta, se).into()]);
    }
    let mut notes = vec![format!(
        "slots_run = {}, replications = {}, seed = {}",
        stats.slots_run, stats.replications, sc.seed
    )];
    if sc.channel.is_some() {
        notes.push(format!("max_inversion_ulps = {}", stats.max_inversion_ulps));
    }
    Ok(Report { table: t, notes })
}

enum Point {
    Noma(Scenario, PowerProfile),
    Baseline(Scenario, f64),
}

fn sweep_point(cfg: &ExperimentConfig, axis: Axis, x: f64) -> Result<Point, CliError> {
    let base = cfg.scenario;
    let (m, v1, v2, g) = (base.m(), base.v1(), base.v2(), base.gamma());
    let at = |s: Result<Scenario, noma_core::NomaError>| -> Result<Point, CliError> {
        Ok(Point::Noma(s?, cfg.profile()?))
    };
    match axis {
        Axis::M => {
            if x < 1.0 || (x - x.round()).abs() > 1e-9 {
                return Err(CliError::Config(format!("sweep over m needs positive integers, got {x}")));
            }
            at(Scenario::new(x.round() as usize, v1, v2, g))
        }
        Axis::V1 => at(Scenario::new(m, x, v2, g)),
        Axis::V2 => at(Scenario::new(m, v1, x, g)),
        Axis::Gamma => at(Scenario::new(m, v1, v2, x)),
        Axis::Tau1 => Ok(Point::Noma(base, PowerProfile::new(x, cfg.tau2)?)),
        Axis::Tau2 => Ok(Point::Noma(base, PowerProfile::new(cfg.tau1, x)?)),
        Axis::PBaseline => {
            PowerProfile::high_only(x)?;
            Ok(Point::Baseline(base, x))
        }
    }
}

fn sweep(cfg: &ExperimentConfig, a: &SweepArgs) -> Result<Report, CliError> {
    let spec = cfg.sweep()?;
    if spec.axis == Axis::PBaseline && (a.simulate || a.optimize) {
        return Err(CliError::Config("axis p_baseline does not support --simulate or --optimize".into()));
    }
    let xs = spec.values()?;
    // Validate every point before doing any heavy work.
    let points: Vec<Point> = xs.iter().map(|&x| sweep_point(cfg, spec.axis, x)).collect::<Result<_, _>>()?;

    let mut columns = vec![spec.axis.name(), "p_success", "th_avg"];
    if a.simulate {
        columns.extend(["sim_p_success", "sim_p_success_stderr", "sim_throughput", "sim_throughput_stderr"]);
    }
    if a.optimize {
        columns.extend(["tau1_star", "tau2_star", "th_star"]);
    }
    let sc = sim_config(cfg, false);
    let ac = AscentConfig::default();

    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .zip(points.par_iter())
        .map(|(&x, point)| -> Result<Vec<Cell>, CliError> {
            let x_cell = if spec.axis == Axis::M { Cell::from(x.round() as usize) } else { Cell::from(x) };
            match point {
                Point::Baseline(s, p) => {
                    let (ps, th) = (baseline_success(s, *p), baseline_throughput(s, *p));
                    check_point(s, &PowerProfile::high_only(*p)?, ps, th)?;
                    Ok(vec![x_cell, ps.into(), th.into()])
                }
                Point::Noma(s, p) => {
                    let (ps, th) = (success_probability(s, p), average_throughput(s, p));
                    check_point(s, p, ps, th)?;
                    let mut row = vec![x_cell, ps.into(), th.into()];
                    if a.simulate {
                        let st = run_simulation(s, p, &sc)?;
                        check_stats(&sc, &st)?;
                        row.extend([st.p_success_hat, st.stderr_p, st.throughput_hat, st.stderr_th].map(Cell::from));
                    }
                    if a.optimize {
                        let r = coordinate_ascent(s, &ac)?;
                        check_optimum(s, &r)?;
                        row.extend([r.tau1_star, r.tau2_star, r.th_star].map(Cell::from));
                    }
                    Ok(row)
                }
            }
        })
        .collect::<Result<_, _>>()?;

    let mut t = Table::new(columns);
    for r in rows {
        t.push(r);
    }
    Ok(t.into())
}
