//! Interaction schedules and round accounting.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed by a
//! 64-bit seed, with the trial index selecting the ChaCha stream. A given
//! `(kind, seed, stream, graph)` always yields the same arc sequence.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Arc, Digraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Each step picks an arc uniformly and independently.
    UniformRandom,
    /// A fixed permutation of all arcs, repeated forever.
    RoundRobin,
    /// A fresh random permutation of all arcs per block of `|E|` steps.
    ShuffledRounds,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::UniformRandom => "uniform_random",
            ScheduleKind::RoundRobin => "round_robin",
            ScheduleKind::ShuffledRounds => "shuffled_rounds",
        }
    }

    pub fn is_weakly_fair(self) -> bool {
        !matches!(self, ScheduleKind::UniformRandom)
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Builds the RNG for trial `stream` of master seed `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// An infinite, lazily generated arc sequence over one graph.
///
/// Arcs are addressed by their index in [`Digraph::arcs`].
#[derive(Clone, Debug)]
pub struct Schedule<'g> {
    graph: &'g Digraph,
    kind: ScheduleKind,
    rng: ChaCha8Rng,
    order: Vec<usize>,
    pos: usize,
}

impl<'g> Schedule<'g> {
    /// Round robin uses lexicographic arc order; see
    /// [`with_seeded_order`](Self::with_seeded_order).
    pub fn new(graph: &'g Digraph, kind: ScheduleKind, seed: u64) -> Self {
        Self::with_stream(graph, kind, seed, 0)
    }

    pub fn with_stream(graph: &'g Digraph, kind: ScheduleKind, seed: u64, stream: u64) -> Self {
        let order: Vec<usize> = (0..graph.arc_count()).collect();
        let pos = match kind {
            // forces a fresh shuffle before the first emission
            ScheduleKind::ShuffledRounds => order.len(),
            _ => 0,
        };
        Self { graph, kind, rng: trial_rng(seed, stream), order, pos }
    }

    /// Replaces the round-robin order with a permutation drawn from the
    /// schedule's own RNG. No effect on the other kinds.
    pub fn with_seeded_order(mut self) -> Self {
        if self.kind == ScheduleKind::RoundRobin {
            self.order.shuffle(&mut self.rng);
        }
        self
    }

    /// Round robin over an explicit order of arc indices.
    pub fn round_robin_with_order(graph: &'g Digraph, order: Vec<usize>) -> Self {
        assert_eq!(order.len(), graph.arc_count(), "order must be a permutation of the arcs");
        Self { graph, kind: ScheduleKind::RoundRobin, rng: trial_rng(0, 0), order, pos: 0 }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn graph(&self) -> &'g Digraph {
        self.graph
    }

    #[inline]
    pub fn next_index(&mut self) -> usize {
        match self.kind {
            ScheduleKind::UniformRandom => self.rng.random_range(0..self.order.len()),
            ScheduleKind::RoundRobin => {
                let i = self.order[self.pos];
                self.pos = (self.pos + 1) % self.order.len();
                i
            }
            ScheduleKind::ShuffledRounds => {
                if self.pos == self.order.len() {
                    self.order.shuffle(&mut self.rng);
                    self.pos = 0;
                }
                let i = self.order[self.pos];
                self.pos += 1;
                i
            }
        }
    }

    #[inline]
    pub fn next_arc(&mut self) -> Arc {
        let i = self.next_index();
        self.graph.arcs()[i]
    }
}

impl Iterator for Schedule<'_> {
    type Item = Arc;

    fn next(&mut self) -> Option<Arc> {
        Some(self.next_arc())
    }
}

/// Splits an interaction sequence into rounds: each round is the shortest
/// segment in which every arc occurs at least once.
#[derive(Clone, Debug)]
pub struct RoundCounter {
    seen: Vec<bool>,
    missing: usize,
    current_len: u64,
    completed_rounds: u64,
    lengths: Vec<u64>,
}

impl RoundCounter {
    pub fn new(arc_count: usize) -> Self {
        Self {
            seen: vec![false; arc_count],
            missing: arc_count,
            current_len: 0,
            completed_rounds: 0,
            lengths: Vec::new(),
        }
    }

    /// Records one interaction by arc index. Returns true if it completed a round.
    #[inline]
    pub fn advance(&mut self, arc_index: usize) -> bool {
        self.current_len += 1;
        if !self.seen[arc_index] {
            self.seen[arc_index] = true;
            self.missing -= 1;
            if self.missing == 0 {
                self.lengths.push(self.current_len);
                self.completed_rounds += 1;
                self.current_len = 0;
                self.seen.iter_mut().for_each(|s| *s = false);
                self.missing = self.seen.len();
                return true;
            }
        }
        false
    }

    pub fn completed_rounds(&self) -> u64 {
        self.completed_rounds
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// Number of rounds the interactions so far touch, counting a partial
    /// round in progress.
    pub fn rounds_touched(&self) -> u64 {
        self.completed_rounds + u64::from(self.current_len > 0)
    }

    /// Arcs seen in the round in progress.
    pub fn seen_this_round(&self) -> usize {
        self.seen.len() - self.missing
    }
}

/// Mean length of the first `rounds` rounds of a uniformly random schedule.
pub fn expected_round_length_check(g: &Digraph, rounds: usize, seed: u64) -> f64 {
    let mut schedule = Schedule::new(g, ScheduleKind::UniformRandom, seed);
    let mut counter = RoundCounter::new(g.arc_count());
    while (counter.completed_rounds() as usize) < rounds {
        counter.advance(schedule.next_index());
    }
    let total: u64 = counter.lengths().iter().sum();
    total as f64 / rounds as f64
}
