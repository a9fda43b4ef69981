//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use noma_core::analytic::{
    average_throughput, baseline_optimum, decode_feasibility, joint_pmf, region_bounds, sinr_high, sinr_low,
    success_probability,
};
use noma_core::optimizer::{coordinate_ascent, grid_search_oracle, maximize_1d, AscentConfig};
use noma_core::simulator::{run_simulation, SimConfig};
use noma_core::{CountPair, PowerProfile, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// A command line and, when it differs, the line of its repeat run.
type Case<'a> = (Vec<&'a str>, Vec<&'a str>);

fn random_scenario(rng: &mut ChaCha8Rng, max_m: usize) -> Scenario {
    let m = rng.random_range(1..=max_m);
    let v1 = rng.random_range(1.0..=20.0);
    let v2 = rng.random_range(0.2..v1);
    let gamma = rng.random_range(0.1..=5.0);
    Scenario::new(m, v1, v2, gamma).unwrap()
}

fn random_profile(rng: &mut ChaCha8Rng) -> PowerProfile {
    let t1: f64 = rng.random();
    let t2 = rng.random::<f64>() * (1.0 - t1);
    PowerProfile::new(t1, t2).unwrap()
}

/// Some first-decoded SINR lies within 1e-9 of the threshold.
fn near_boundary(s: &Scenario) -> bool {
    (0..=s.m() + 1).any(|n1| {
        (0..=s.m() + 1 - n1).any(|n2| {
            let pair = CountPair::new(n1, n2);
            let close = |r: noma_core::Result<f64>| r.is_ok_and(|x| (x - s.gamma()).abs() < 1e-9);
            close(sinr_high(s, 1, pair)) || close(sinr_low(s, 1, pair))
        })
    })
}

fn pmf_direct(m: usize, t1: f64, t2: f64, n1: usize, n2: usize) -> f64 {
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    binom(m, n1 + n2) * binom(n1 + n2, n1) * t1.powi(n1 as i32) * t2.powi(n2 as i32) * (1.0 - t1 - t2).powi((m - n1 - n2) as i32)
}

fn c1_region_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut checked, mut skipped) = (0, 0);
    while checked < 250 {
        let s = random_scenario(&mut rng, 20);
        if near_boundary(&s) {
            skipped += 1;
            continue;
        }
        let b = region_bounds(&s);
        for pair in s.pairs() {
            let f = decode_feasibility(&s, pair);
            if b.in_region_a(pair) != f.high_ok || b.in_region_b(pair) != f.low_ok {
                return Err(format!("{s:?} {pair:?}: bounds disagree with the SINR predicate"));
            }
        }
        checked += 1;
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{checked} scenarios ({skipped} boundary cases skipped) in {t:.2?}"))
}

fn c2_pmf_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = Scenario::default().with_m(rng.random_range(1..=30)).unwrap();
        let p = random_profile(&mut rng);
        let total: f64 = s.pairs().map(|pair| joint_pmf(&s, &p, pair)).sum();
        worst = worst.max((total - 1.0).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("100 cases, max |sum - 1| = {worst:.2e}"))
    } else {
        Err(format!("max |sum - 1| = {worst:.2e}"))
    }
}

fn c3_throughput_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let s = random_scenario(&mut rng, 12);
        let p = random_profile(&mut rng);
        let brute: f64 = s
            .pairs()
            .map(|pair| {
                let f = decode_feasibility(&s, pair);
                let mut rate = 0.0;
                if f.high_ok {
                    rate += (1..=pair.n1).map(|i| (1.0 + sinr_high(&s, i, pair).unwrap()).log2()).sum::<f64>();
                }
                if f.low_ok {
                    rate += (1..=pair.n2).map(|j| (1.0 + sinr_low(&s, j, pair).unwrap()).log2()).sum::<f64>();
                }
                rate * pmf_direct(s.m(), p.tau1(), p.tau2(), pair.n1, pair.n2)
            })
            .sum();
        worst = worst.max((brute - average_throughput(&s, &p)).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("50 cases, max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

fn c4_simulation_agreement() -> Outcome {
    let s = Scenario::default();
    let p = PowerProfile::new(0.1, 0.1).unwrap();
    let cfg = SimConfig { slots: 1_000_000, seed: 1, replications: 10, channel: None };
    let start = Instant::now();
    let st = run_simulation(&s, &p, &cfg).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let zp = (st.p_success_hat - success_probability(&s, &p)) / st.stderr_p;
    let zt = (st.throughput_hat - average_throughput(&s, &p)) / st.stderr_th;
    let msg = format!("z(p_success) = {zp:.3}, z(throughput) = {zt:.3}, {t:.2?}");
    if zp.abs() <= 3.0 && zt.abs() <= 3.0 && t < Duration::from_secs(30) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c5_ascent_vs_oracle() -> Outcome {
    let cfg = AscentConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut scenarios = vec![Scenario::default()];
    scenarios.extend((0..10).map(|_| random_scenario(&mut rng, 20)));
    let mut worst = f64::INFINITY;
    for s in &scenarios {
        let a = coordinate_ascent(s, &cfg).map_err(|e| e.to_string())?;
        let g = grid_search_oracle(s, 0.01).map_err(|e| e.to_string())?;
        let margin = a.th_star - g.th_star;
        worst = worst.min(margin);
        if margin < -1e-3 {
            return Err(format!("{s:?}: ascent {} vs oracle {}", a.th_star, g.th_star));
        }
    }
    let d = coordinate_ascent(&Scenario::default(), &cfg).map_err(|e| e.to_string())?;
    if !d.converged || d.outer_iterations > 20 {
        return Err(format!("defaults: converged = {}, {} iterations", d.converged, d.outer_iterations));
    }
    Ok(format!(
        "11 scenarios, min(ascent - oracle) = {worst:.2e}; defaults converged in {} iterations",
        d.outer_iterations
    ))
}

fn c6_high_mode_dominates() -> Outcome {
    let r = coordinate_ascent(&Scenario::default(), &AscentConfig::default()).map_err(|e| e.to_string())?;
    let msg = format!("tau1* = {:.5}, tau2* = {:.5}", r.tau1_star, r.tau2_star);
    if r.tau1_star > r.tau2_star {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c7_beats_baseline() -> Outcome {
    let s = Scenario::default();
    let r = coordinate_ascent(&s, &AscentConfig::default()).map_err(|e| e.to_string())?;
    let (_, base) = baseline_optimum(&s);
    let msg = format!("NOMA th* = {:.5}, ALOHA optimum = {base:.5}", r.th_star);
    if r.th_star > 0.08996 && r.th_star > base {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c8_baseline_argmax() -> Outcome {
    let mut found = Vec::new();
    for m in [2usize, 5, 10, 50] {
        let f = |p: f64| p * (1.0 - p).powi(m as i32 - 1);
        let (p, _) = maximize_1d(f, 1.0, 1e-3, 3);
        if (p - 1.0 / m as f64).abs() > 1e-4 {
            return Err(format!("m = {m}: argmax {p}, expected {}", 1.0 / m as f64));
        }
        found.push(format!("m={m}: {p:.6}"));
    }
    Ok(found.join(", "))
}

fn c9_single_interior_peak() -> Outcome {
    let p = PowerProfile::new(0.1, 0.1).unwrap();
    let th: Vec<f64> = (1..=40).map(|m| average_throughput(&Scenario::default().with_m(m).unwrap(), &p)).collect();
    let peaks: Vec<usize> = (1..th.len() - 1).filter(|&k| th[k] > th[k - 1] && th[k] > th[k + 1]).map(|k| k + 1).collect();
    match peaks.as_slice() {
        [m] => Ok(format!("peak at m = {m}, th = {:.5}", th[m - 1])),
        other => Err(format!("interior maxima at m = {other:?}")),
    }
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_noma-aloha"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    let mut bytes = out.stdout;
    bytes.extend_from_slice(b"\n--stderr--\n");
    bytes.extend(out.stderr);
    Ok(bytes)
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let trace = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (ta, tb) = (trace("a.csv"), trace("b.csv"));
    let sim = ["simulate", "--slots", "20000", "--replications", "4", "--seed", "7"];
    let cases: Vec<Case> = vec![
        (vec!["region"], vec![]),
        (vec!["analyze", "--format", "json"], vec![]),
        (vec!["optimize", "--oracle", "--baseline"], vec![]),
        (vec!["optimize", "--trace", "--format", "text"], vec![]),
        (sim.iter().copied().chain(["--trace-out", &ta]).collect(), sim.iter().copied().chain(["--trace-out", &tb]).collect()),
        (vec!["simulate", "--slots", "20000", "--channel", "--format", "text"], vec![]),
        (vec!["sweep", "--axis", "gamma", "--start", "0.5", "--stop", "3", "--step", "0.5", "--simulate", "--slots", "5000", "--optimize"], vec![]),
        (vec!["sweep", "--axis", "p_baseline", "--start", "0", "--stop", "1", "--step", "0.05"], vec![]),
    ];
    for (a, b) in &cases {
        let b = if b.is_empty() { a } else { b };
        if run_bin(a)? != run_bin(b)? {
            return Err(format!("output differs across runs of {a:?}"));
        }
    }
    let read = |p: &str| std::fs::read(Path::new(p)).map_err(|e| e.to_string());
    if read(&ta)? != read(&tb)? {
        return Err("per-slot traces differ".into());
    }
    Ok(format!("{} commands byte-identical across two runs", cases.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 region bounds match SINR predicate", c1_region_equivalence),
        ("2 joint pmf normalizes", c2_pmf_normalization),
        ("3 throughput matches brute force", c3_throughput_brute_force),
        ("4 simulation within 3 SE of analysis", c4_simulation_agreement),
        ("5 ascent reaches grid oracle", c5_ascent_vs_oracle),
        ("6 high mode favoured at optimum", c6_high_mode_dominates),
        ("7 NOMA beats single-power ALOHA", c7_beats_baseline),
        ("8 ALOHA argmax is 1/m", c8_baseline_argmax),
        ("9 single interior peak in m", c9_single_interior_peak),
        ("10 deterministic command output", c10_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
