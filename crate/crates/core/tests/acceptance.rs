//! One test per acceptance criterion. Each prints a single PASS/FAIL line.
//!
//! Tolerances are fixed here and nowhere else.

use std::time::{Duration, Instant};

use cliqueid::engine::{measure_scaling, run, run_trials, RunLabel, RunOptions, RunRecord};
use cliqueid::graph::{generate, Arc, Digraph, GraphKind};
use cliqueid::modelcheck::{check_global_fairness, explore, DEFAULT_CAP};
use cliqueid::protocol::{Output, Protocol};
use cliqueid::protocols::{Cig, CiwN, CiwNk};
use cliqueid::scheduler::{expected_round_length_check, Schedule, ScheduleKind};
use cliqueid::stats::{coupon_collector_expect, loglog_slope};
use cliqueid::transform::{f_transform, mirrored_run};

const MODELCHECK_BUDGET: Duration = Duration::from_secs(60);
const SLOPE_RANGE: (f64, f64) = (2.5, 3.8);
const SPEEDUP_RATIO: f64 = 0.7;
const MAX_INVERSIONS: usize = 1;
const ROUND_LENGTH_TOLERANCE: f64 = 0.05;
const ROUND_SAMPLES: usize = 100_000;
const SEED: u64 = 2024;

fn report(id: u32, title: &str, pass: bool, detail: &str) {
    println!("criterion {id} [{title}]: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn near_complete(n: usize) -> Digraph {
    generate(GraphKind::NearCompleteMinusOneArc, n, SEED).unwrap()
}

fn solves<P: Protocol>(p: &P, g: &Digraph, expected: Output) -> Result<(bool, usize), String> {
    let cg = explore(p, g, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let v = check_global_fairness(&cg, expected);
    Ok((v.solves, v.reachable_count))
}

#[test]
fn criterion_1_exhaustive_correctness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut total_configs = 0usize;
    let mut record = |what: String, r: Result<(bool, usize), String>| match r {
        Ok((true, c)) => total_configs += c,
        Ok((false, _)) => failures.push(what),
        Err(e) => failures.push(format!("{what}: {e}")),
    };
    let k = |n| generate(GraphKind::Complete, n, 0).unwrap();
    let ring = generate(GraphKind::DirectedRing, 3, 0).unwrap();
    let line = generate(GraphKind::DirectedLine, 3, 0).unwrap();
    let minus = near_complete(3);
    let instances: Vec<(Digraph, Output, &str)> = vec![
        (k(2), Output::Yes, "K2"),
        (k(3), Output::Yes, "K3"),
        (ring, Output::No, "C3"),
        (line, Output::No, "P3"),
        (minus, Output::No, "K3-arc"),
    ];
    for (g, expected, name) in &instances {
        let n = g.n();
        record(format!("ciw_n {name}"), solves(&CiwN::new(n).unwrap(), g, *expected));
        for kk in [1, n] {
            record(format!("ciw_nk k={kk} {name}"), solves(&CiwNk::new(n, kk).unwrap(), g, *expected));
        }
    }
    let (g2, _, _) = &instances[0];
    record("cig K2".into(), solves(&Cig::new(), g2, Output::Yes));
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < MODELCHECK_BUDGET;
    report(
        1,
        "exhaustive correctness",
        pass,
        &format!("{} configurations explored in {:.2?}; failures: {failures:?}", total_configs, elapsed),
    );
}

#[test]
fn criterion_2_round_bound_under_weak_fairness() {
    let mut worst_slack = i64::MAX;
    let mut failures = Vec::new();
    for n in 2..=32usize {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let p = CiwN::new(n).unwrap();
        let bound = 2 * n as u64 + 3;
        for kind in [ScheduleKind::RoundRobin, ScheduleKind::ShuffledRounds] {
            for seed in 0..10u64 {
                let mut s = Schedule::new(&g, kind, SEED + seed).with_seeded_order();
                let label = RunLabel { graph: "complete".into(), seed, trial: 0 };
                let r = run(&p, &g, &mut s, RunOptions::positive(n).checked(), &label);
                match r.rounds_to_stabilize {
                    Some(rounds) if rounds <= bound && r.invariant_violations.is_empty() => {
                        worst_slack = worst_slack.min(bound as i64 - rounds as i64)
                    }
                    other => failures.push(format!("n={n} {kind} seed={seed}: rounds {other:?}")),
                }
            }
        }
    }
    report(
        2,
        "2n+3 round bound",
        failures.is_empty(),
        &format!("620 runs, smallest slack {worst_slack} rounds; failures: {failures:?}"),
    );
}

fn negative_fixtures(n: usize) -> Vec<(&'static str, Digraph)> {
    vec![
        ("ring", generate(GraphKind::DirectedRing, n, 0).unwrap()),
        ("line", generate(GraphKind::DirectedLine, n, 0).unwrap()),
        ("star", generate(GraphKind::StarBidir, n, 0).unwrap()),
        ("near_complete", near_complete(n)),
    ]
}

#[test]
fn criterion_3_negative_soundness() {
    let mut sightings = Vec::new();
    let mut runs = 0;
    for n in [4usize, 8, 16] {
        let opts = RunOptions::negative(n);
        for (name, g) in negative_fixtures(n) {
            assert!(!g.is_complete());
            let mut check = |rs: Vec<RunRecord>| {
                runs += rs.len();
                for r in rs.iter().filter(|r| r.phase4_sightings > 0 || r.steps_run != opts.max_steps) {
                    sightings.push(format!("{} k={:?} n={n} {name} trial {}", r.protocol, r.k, r.trial));
                }
            };
            let kind = ScheduleKind::UniformRandom;
            check(run_trials(&CiwN::new(n).unwrap(), &g, kind, SEED, 10, opts, name));
            for k in [1, 2, n / 2] {
                check(run_trials(&CiwNk::new(n, k).unwrap(), &g, kind, SEED, 10, opts, name));
            }
            check(run_trials(&Cig::new(), &g, kind, SEED, 10, opts, name));
        }
    }
    report(
        3,
        "negative soundness",
        sightings.is_empty(),
        &format!("{runs} runs over 50 n^3 ceil(ln n) steps; sightings: {sightings:?}"),
    );
}

#[test]
fn criterion_4_scaling_slope() {
    let sizes = [8, 16, 32, 64];
    let rows = measure_scaling(|n| CiwN::new(n).unwrap(), &sizes, 30, SEED, ScheduleKind::UniformRandom);
    let unstabilized: u64 = rows.iter().map(|r| r.unstabilized).sum();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.mean_steps)).collect();
    let slope = loglog_slope(&pts).unwrap();
    let pass = unstabilized == 0 && (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope);
    let means: Vec<String> = rows.iter().map(|r| format!("n={}: {:.0}", r.n, r.mean_steps)).collect();
    report(
        4,
        "scaling slope",
        pass,
        &format!("slope {slope:.3}, means [{}], unstabilized {unstabilized}", means.join(", ")),
    );
}

#[test]
fn criterion_5_group_speedup() {
    let n = 32;
    let ks = [1usize, 2, 4, 8];
    let means: Vec<f64> = ks
        .iter()
        .map(|&k| {
            let rows = measure_scaling(|n| CiwNk::new(n, k).unwrap(), &[n], 30, SEED, ScheduleKind::UniformRandom);
            assert_eq!(rows[0].unstabilized, 0, "k={k} had unstabilized trials");
            rows[0].mean_steps
        })
        .collect();
    let ratio = means[3] / means[0];
    let inversions = means.windows(2).filter(|w| w[1] > w[0]).count();
    let pass = ratio <= SPEEDUP_RATIO && inversions <= MAX_INVERSIONS;
    report(
        5,
        "group speedup",
        pass,
        &format!("means k=1,2,4,8: {means:.0?}; k=8/k=1 = {ratio:.3}; inversions {inversions}"),
    );
}

fn checked_runs<P: Protocol>(
    p: &P,
    g: &Digraph,
    name: &str,
    mode_negative: bool,
    violations: &mut Vec<String>,
) -> usize {
    let n = g.n();
    let base = if mode_negative { RunOptions::negative(n).with_max_steps(200_000) } else { RunOptions::positive(n) };
    let mut count = 0;
    for kind in [ScheduleKind::UniformRandom, ScheduleKind::RoundRobin, ScheduleKind::ShuffledRounds] {
        for trial in 0..3 {
            let mut s = Schedule::with_stream(g, kind, SEED, trial).with_seeded_order();
            let label = RunLabel { graph: name.into(), seed: SEED, trial };
            let r = run(p, g, &mut s, base.checked(), &label);
            count += 1;
            for v in &r.invariant_violations {
                violations.push(format!("{} k={:?} {name} n={n} {kind} trial {trial}: {v}", r.protocol, r.k));
            }
        }
    }
    count
}

#[test]
fn criterion_6_invariant_matrix() {
    let mut violations = Vec::new();
    let mut runs = 0;
    for n in [2usize, 3, 5, 8, 12] {
        let complete = generate(GraphKind::Complete, n, 0).unwrap();
        runs += checked_runs(&CiwN::new(n).unwrap(), &complete, "complete", false, &mut violations);
        for k in [1, 2.min(n), n.div_ceil(2), n] {
            runs += checked_runs(&CiwNk::new(n, k).unwrap(), &complete, "complete", false, &mut violations);
        }
        runs += checked_runs(&Cig::new(), &complete, "complete", false, &mut violations);
        if n >= 3 {
            for (name, g) in negative_fixtures(n) {
                runs += checked_runs(&CiwN::new(n).unwrap(), &g, name, true, &mut violations);
                runs += checked_runs(&CiwNk::new(n, 2).unwrap(), &g, name, true, &mut violations);
                runs += checked_runs(&Cig::new(), &g, name, true, &mut violations);
            }
            let random = generate(GraphKind::RandomWeaklyConnected, n, SEED).unwrap();
            runs += checked_runs(&Cig::new(), &random, "random", true, &mut violations);
        }
    }
    report(6, "invariant suite", violations.is_empty(), &format!("{runs} checked runs; violations: {violations:?}"));
}

#[test]
fn criterion_7_round_length_statistics() {
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [2usize, 3] {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let expect = coupon_collector_expect(g.arc_count());
        let got = expected_round_length_check(&g, ROUND_SAMPLES, SEED);
        let rel = (got - expect).abs() / expect;
        pass &= rel <= ROUND_LENGTH_TOLERANCE;
        lines.push(format!("K{n}: {got:.3} vs {expect:.3} ({:.2}%)", rel * 100.0));
    }
    report(7, "round lengths", pass, &lines.join(", "));
}

#[test]
fn criterion_8_transform() {
    let noncomplete = (2..=16).all(|n| !f_transform(&generate(GraphKind::Complete, n, 0).unwrap()).is_complete());
    let k2 = generate(GraphKind::Complete, 2, 0).unwrap();
    let mut want: Vec<Arc> =
        [(0, 1), (1, 0), (2, 3), (3, 2), (0, 3), (2, 1), (3, 0), (1, 2)].into_iter().map(Arc::from).collect();
    want.sort();
    let f = f_transform(&k2);
    let arcs_match = f.arcs() == want.as_slice();
    let p = CiwN::new(2).unwrap();
    let r = mirrored_run(&p, &k2, Schedule::new(&k2, ScheduleKind::UniformRandom, SEED), 10_000).unwrap();
    let pass = noncomplete && arcs_match && r.held && r.base_steps == 10_000 && r.image_all_yes();
    report(
        8,
        "doubled graph",
        pass,
        &format!(
            "f(K_n) non-complete for n in 2..=16: {noncomplete}; f(K2) arcs match: {arcs_match}; mirror held: {}; image outputs {:?}",
            r.held, r.image_outputs
        ),
    );
}

#[test]
fn criterion_9_state_bounds() {
    let mut problems = Vec::new();
    let mut worst: (f64, String) = (0.0, String::new());
    let mut note = |used: usize, bound: u64, what: String, problems: &mut Vec<String>| {
        if used as u64 > bound {
            problems.push(format!("{what}: {used} > {bound}"));
        }
        let frac = used as f64 / bound as f64;
        if frac > worst.0 {
            worst = (frac, format!("{what}: {used}/{bound}"));
        }
    };
    for n in 2..=8usize {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let opts = RunOptions::positive(n).with_census();
        let p = CiwN::new(n).unwrap();
        for r in run_trials(&p, &g, ScheduleKind::UniformRandom, SEED, 10, opts, "complete") {
            note(
                r.state_census.unwrap().distinct_states_seen,
                p.state_bound().unwrap(),
                format!("ciw_n n={n}"),
                &mut problems,
            );
        }
        for k in 1..=4.min(n) {
            let p = CiwNk::new(n, k).unwrap();
            for r in run_trials(&p, &g, ScheduleKind::UniformRandom, SEED, 10, opts, "complete") {
                note(
                    r.state_census.unwrap().distinct_states_seen,
                    p.state_bound().unwrap(),
                    format!("ciw_nk n={n} k={k}"),
                    &mut problems,
                );
            }
        }
        let mut graphs = vec![g];
        if n >= 3 {
            graphs.extend(negative_fixtures(n).into_iter().map(|(_, g)| g));
        }
        for g in &graphs {
            let opts = if g.is_complete() { opts } else { RunOptions::negative(n).with_census() };
            for r in run_trials(&Cig::new(), g, ScheduleKind::UniformRandom, SEED, 10, opts, "cig") {
                let c = r.state_census.unwrap();
                let (size, cnt) = (c.per_variable_max["size"], c.per_variable_max["cnt"]);
                if size > n as u64 || cnt > n as u64 {
                    problems.push(format!("cig n={n}: size {size} cnt {cnt}"));
                }
            }
        }
    }
    report(9, "state bounds", problems.is_empty(), &format!("tightest {}; problems: {problems:?}", worst.1));
}
