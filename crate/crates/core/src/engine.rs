//! Executions, stabilization certificates and scaling measurements.
//!
//! Positive runs stop at the first step where every agent satisfies
//! [`Protocol::certified`]. For the `CiwN` family this is "all agents in
//! phase 4", which is absorbing. For `Cig` it additionally requires every size
//! to equal `n`; together with the token-size sum this forces a single token,
//! after which no rule changes an output.
//!
//! Negative runs go for the full horizon and count steps with a certified
//! agent (a false positive) while recording when every agent became settled.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Arc, Digraph};
use crate::protocol::{
    all_outputs, initial_configuration, step_in_place, CensusCollector, Output, Protocol, StateCensus, StepView,
};
use crate::scheduler::{RoundCounter, Schedule, ScheduleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// Run until the positive certificate holds (complete graphs).
    Positive,
    /// Run the whole horizon watching for false positives.
    Negative,
}

fn ln_ceil(n: usize) -> u64 {
    (n as f64).ln().ceil().max(1.0) as u64
}

/// `100 n^3 ceil(ln n)`.
pub fn default_max_steps(n: usize) -> u64 {
    100 * (n as u64).pow(3) * ln_ceil(n)
}

/// `50 n^3 ceil(ln n)`.
pub fn default_negative_horizon(n: usize) -> u64 {
    50 * (n as u64).pow(3) * ln_ceil(n)
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub max_steps: u64,
    pub mode: RunMode,
    pub invariant_checks: bool,
    pub census: bool,
}

impl RunOptions {
    pub fn positive(n: usize) -> Self {
        Self { max_steps: default_max_steps(n), mode: RunMode::Positive, invariant_checks: false, census: false }
    }

    pub fn negative(n: usize) -> Self {
        Self { max_steps: default_negative_horizon(n), mode: RunMode::Negative, invariant_checks: false, census: false }
    }

    pub fn checked(mut self) -> Self {
        self.invariant_checks = true;
        self
    }

    pub fn with_census(mut self) -> Self {
        self.census = true;
        self
    }

    pub fn with_max_steps(mut self, steps: u64) -> Self {
        self.max_steps = steps;
        self
    }
}

/// Enough to replay a failed run: the record's graph, schedule and seed plus
/// the step at which the check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub step: u64,
    pub arc: Arc,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} arc {}: {}", self.step, self.arc, self.message)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub graph: String,
    pub n: usize,
    pub arcs: usize,
    pub protocol: String,
    pub k: Option<usize>,
    pub schedule: ScheduleKind,
    pub seed: u64,
    pub trial: u64,
    pub mode: RunMode,
    /// Interactions until the certificate first held; `None` if never.
    pub interactions_to_stabilize: Option<u64>,
    /// Rounds spanned by those interactions, counting the last partial round.
    pub rounds_to_stabilize: Option<u64>,
    pub steps_run: u64,
    /// Steps after which some agent satisfied the positive certificate.
    /// Always zero on a correct negative run.
    pub phase4_sightings: u64,
    pub first_sighting: Option<u64>,
    pub invariant_violations: Vec<Violation>,
    pub state_census: Option<StateCensus>,
    pub final_outputs: Vec<Output>,
}

impl RunRecord {
    pub fn stabilized(&self) -> bool {
        self.interactions_to_stabilize.is_some()
    }

    /// The run met its mode's acceptance condition.
    pub fn accepted(&self) -> bool {
        self.invariant_violations.is_empty()
            && match self.mode {
                RunMode::Positive => self.stabilized(),
                RunMode::Negative => self.phase4_sightings == 0,
            }
    }
}

/// Describes what is being run; copied into every record.
#[derive(Clone, Debug)]
pub struct RunLabel {
    pub graph: String,
    pub seed: u64,
    pub trial: u64,
}

/// Drives one execution.
///
/// With invariant checks on, the protocol's configuration and step checks
/// run after every interaction and the first violation stops the run.
pub fn run<P: Protocol>(
    p: &P,
    g: &Digraph,
    schedule: &mut Schedule<'_>,
    opts: RunOptions,
    label: &RunLabel,
) -> RunRecord {
    let n = g.n();
    let mut config = initial_configuration(p, n);
    let mut census = opts.census.then(CensusCollector::default);
    if let Some(c) = census.as_mut() {
        c.observe(p, config[0]);
    }
    let mut rounds = RoundCounter::new(g.arc_count());
    let mut certified = config.iter().filter(|s| p.certified(s, n)).count();
    let mut settled = config.iter().filter(|s| p.settled(s, n)).count();
    let mut record = RunRecord {
        graph: label.graph.clone(),
        n,
        arcs: g.arc_count(),
        protocol: p.name().to_string(),
        k: p.params().k,
        schedule: schedule.kind(),
        seed: label.seed,
        trial: label.trial,
        mode: opts.mode,
        interactions_to_stabilize: None,
        rounds_to_stabilize: None,
        steps_run: 0,
        phase4_sightings: 0,
        first_sighting: None,
        invariant_violations: Vec::new(),
        state_census: None,
        final_outputs: Vec::new(),
    };
    let stable_now = |certified: usize, settled: usize| match opts.mode {
        RunMode::Positive => certified == n,
        RunMode::Negative => settled == n && certified == 0,
    };
    if stable_now(certified, settled) {
        record.interactions_to_stabilize = Some(0);
        record.rounds_to_stabilize = Some(0);
    }
    if opts.invariant_checks {
        if let Err(message) = p.check_configuration(&config) {
            record.invariant_violations.push(Violation { step: 0, arc: Arc::new(0, 0), message });
        }
    }

    let arcs = g.arcs();
    let mut step = 0u64;
    while step < opts.max_steps && record.invariant_violations.is_empty() {
        if opts.mode == RunMode::Positive && record.interactions_to_stabilize.is_some() {
            break;
        }
        let idx = schedule.next_index();
        let arc = arcs[idx];
        let (u, v) = (arc.initiator, arc.responder);
        let before = (config[u], config[v]);
        step_in_place(p, &mut config, arc);
        step += 1;
        rounds.advance(idx);
        let after = (config[u], config[v]);

        for (b, a) in [(before.0, after.0), (before.1, after.1)] {
            certified = certified + p.certified(&a, n) as usize - p.certified(&b, n) as usize;
            settled = settled + p.settled(&a, n) as usize - p.settled(&b, n) as usize;
        }
        if let Some(c) = census.as_mut() {
            c.observe(p, after.0);
            c.observe(p, after.1);
        }
        if opts.invariant_checks {
            let view = StepView { arc, before, after: &config };
            if let Err(message) = p.check_configuration(&config).and_then(|_| p.check_invariants(&view)) {
                record.invariant_violations.push(Violation { step, arc, message });
            }
        }
        if certified > 0 {
            record.phase4_sightings += 1;
            record.first_sighting.get_or_insert(step);
        }
        if record.interactions_to_stabilize.is_none() && stable_now(certified, settled) {
            record.interactions_to_stabilize = Some(step);
            record.rounds_to_stabilize = Some(rounds.rounds_touched());
        }
    }
    // a false positive voids the negative certificate
    if opts.mode == RunMode::Negative && record.phase4_sightings > 0 {
        record.interactions_to_stabilize = None;
        record.rounds_to_stabilize = None;
    }
    record.steps_run = step;
    record.state_census = census.map(|c| c.finish());
    record.final_outputs = all_outputs(p, &config);
    record
}

/// Runs `trials` independent executions in parallel; trial `t` uses ChaCha
/// stream `t` of `seed`. Output order follows the trial index.
pub fn run_trials<P: Protocol>(
    p: &P,
    g: &Digraph,
    kind: ScheduleKind,
    seed: u64,
    trials: u64,
    opts: RunOptions,
    graph_name: &str,
) -> Vec<RunRecord> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut schedule = Schedule::with_stream(g, kind, seed, trial);
            let label = RunLabel { graph: graph_name.to_string(), seed, trial };
            run(p, g, &mut schedule, opts, &label)
        })
        .collect()
}

/// One row of a scaling sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingRow {
    pub protocol: String,
    pub n: usize,
    pub k: Option<usize>,
    pub graph: String,
    pub schedule: ScheduleKind,
    pub seed: u64,
    pub trials: u64,
    pub mean_steps: f64,
    pub std_steps: f64,
    pub mean_rounds: f64,
    /// Trials that hit `max_steps` without stabilizing; statistics cover
    /// the remaining trials only.
    #[serde(skip)]
    pub unstabilized: u64,
    #[serde(skip)]
    pub steps: Vec<u64>,
}

impl ScalingRow {
    pub fn flagged(&self) -> bool {
        self.unstabilized > 0
    }
}

/// Summarizes records of one `(protocol, n, k)` cell.
pub fn summarize(records: &[RunRecord], seed: u64) -> ScalingRow {
    let first = records.first().expect("at least one record");
    let steps: Vec<u64> = records.iter().filter_map(|r| r.interactions_to_stabilize).collect();
    let rounds: Vec<f64> = records.iter().filter_map(|r| r.rounds_to_stabilize.map(|x| x as f64)).collect();
    let xs: Vec<f64> = steps.iter().map(|&s| s as f64).collect();
    ScalingRow {
        protocol: first.protocol.clone(),
        n: first.n,
        k: first.k,
        graph: first.graph.clone(),
        schedule: first.schedule,
        seed,
        trials: records.len() as u64,
        mean_steps: crate::stats::mean(&xs),
        std_steps: crate::stats::std_dev(&xs),
        mean_rounds: crate::stats::mean(&rounds),
        unstabilized: (records.len() - steps.len()) as u64,
        steps,
    }
}

/// Measures stabilization time on complete graphs for each size.
///
/// `family` builds the protocol for a given `n`. Trials for different sizes
/// share the per-trial streams of `seed`, which pairs trials across calls
/// that vary only a protocol parameter.
pub fn measure_scaling<P, F>(family: F, sizes: &[usize], trials: u64, seed: u64, kind: ScheduleKind) -> Vec<ScalingRow>
where
    P: Protocol,
    F: Fn(usize) -> P,
{
    sizes
        .iter()
        .map(|&n| {
            let g = crate::graph::generate(crate::graph::GraphKind::Complete, n, 0).expect("n >= 2");
            let p = family(n);
            let records = run_trials(&p, &g, kind, seed, trials, RunOptions::positive(n), "complete");
            summarize(&records, seed)
        })
        .collect()
}

pub const SCALING_CSV_HEADER: [&str; 10] =
    ["protocol", "n", "k", "graph", "schedule", "seed", "trials", "mean_steps", "std_steps", "mean_rounds"];

pub fn write_scaling_csv(rows: &[ScalingRow], w: impl std::io::Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SCALING_CSV_HEADER)?;
    for r in rows {
        out.write_record([
            r.protocol.clone(),
            r.n.to_string(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            r.graph.clone(),
            r.schedule.to_string(),
            r.seed.to_string(),
            r.trials.to_string(),
            format!("{:.3}", r.mean_steps),
            format!("{:.3}", r.std_steps),
            format!("{:.3}", r.mean_rounds),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::protocols::{Cig, CiwN};

    fn label() -> RunLabel {
        RunLabel { graph: "test".into(), seed: 1, trial: 0 }
    }

    #[test]
    fn ciw_2_on_k2_round_robin_within_bound() {
        let g = generate(GraphKind::Complete, 2, 0).unwrap();
        let p = CiwN::new(2).unwrap();
        let mut s = Schedule::new(&g, ScheduleKind::RoundRobin, 0);
        let r = run(&p, &g, &mut s, RunOptions::positive(2).checked(), &label());
        assert!(r.accepted(), "{r:?}");
        assert!(r.rounds_to_stabilize.unwrap() <= 7);
        assert!(r.interactions_to_stabilize.unwrap() <= 14);
        assert_eq!(r.final_outputs, vec![Output::Yes; 2]);
    }

    #[test]
    fn ciw_3_on_ring_never_says_yes() {
        let g = generate(GraphKind::DirectedRing, 3, 0).unwrap();
        let p = CiwN::new(3).unwrap();
        for kind in [ScheduleKind::UniformRandom, ScheduleKind::RoundRobin, ScheduleKind::ShuffledRounds] {
            let mut s = Schedule::new(&g, kind, 3);
            let r = run(&p, &g, &mut s, RunOptions::negative(3).with_max_steps(1_000_000).checked(), &label());
            assert_eq!(r.phase4_sightings, 0);
            assert_eq!(r.steps_run, 1_000_000);
            assert_eq!(r.interactions_to_stabilize, Some(0));
            assert!(r.accepted());
        }
    }

    #[test]
    fn cig_on_k2_stabilizes_every_seed() {
        let g = generate(GraphKind::Complete, 2, 0).unwrap();
        let records =
            run_trials(&Cig::new(), &g, ScheduleKind::UniformRandom, 5, 50, RunOptions::positive(2).checked(), "k2");
        assert!(records.iter().all(RunRecord::accepted));
    }

    #[test]
    fn replay_is_identical() {
        let g = generate(GraphKind::Complete, 5, 0).unwrap();
        let p = CiwN::new(5).unwrap();
        let a = run_trials(&p, &g, ScheduleKind::UniformRandom, 11, 4, RunOptions::positive(5).with_census(), "k5");
        let b = run_trials(&p, &g, ScheduleKind::UniformRandom, 11, 4, RunOptions::positive(5).with_census(), "k5");
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn horizon_defaults() {
        assert_eq!(default_negative_horizon(4), 50 * 64 * 2);
        assert_eq!(default_max_steps(8), 100 * 512 * 3);
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = measure_scaling(|n| CiwN::new(n).unwrap(), &[3, 4], 3, 1, ScheduleKind::UniformRandom);
        let mut buf = Vec::new();
        write_scaling_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("protocol,n,k,graph,schedule,seed,trials,mean_steps,std_steps,mean_rounds"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..7], &["ciw_n", "3", "", "complete", "uniform_random", "1", "3"]);
        assert_eq!(text.lines().count(), 3);
    }
}
