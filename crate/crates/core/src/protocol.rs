//! The protocol abstraction and the one-step reachability relation.
//!
//! A protocol is an initial state, a transition function over ordered state
//! pairs (initiator first) and an output map. Both functions are pure, so a
//! fixed schedule replays to the same execution.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;
use crate::graph::{Arc, Digraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Yes,
    No,
}

/// Parameters reported alongside measurements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
}

/// Everything an invariant check may look at after one interaction.
pub struct StepView<'a, S> {
    pub arc: Arc,
    /// Initiator and responder states before the interaction.
    pub before: (S, S),
    /// The whole configuration after the interaction.
    pub after: &'a [S],
}

impl<S: Copy> StepView<'_, S> {
    pub fn after_pair(&self) -> (S, S) {
        (self.after[self.arc.initiator], self.after[self.arc.responder])
    }
}

pub trait Protocol: Sync {
    type State: Copy + Eq + Hash + Ord + Debug + Send + Sync + Serialize;

    fn name(&self) -> &'static str;

    fn params(&self) -> ProtocolParams;

    fn initial_state(&self) -> Self::State;

    /// The transition function. Pairs that match no rule map to themselves.
    fn transition(&self, initiator: &Self::State, responder: &Self::State) -> (Self::State, Self::State);

    fn output(&self, state: &Self::State) -> Output;

    /// Per-agent part of the positive stabilization certificate: the agent
    /// is in phase 4 and (for size-estimating protocols) knows the true size.
    /// `n` is the population size of the graph being run on.
    fn certified(&self, state: &Self::State, n: usize) -> bool {
        let _ = n;
        self.output(state) == Output::Yes
    }

    /// Per-agent part of the negative certificate. Protocols with built-in
    /// knowledge of `n` are settled from the start.
    fn settled(&self, state: &Self::State, n: usize) -> bool {
        let _ = (state, n);
        true
    }

    /// Named scalar variables of a state, for the census.
    fn variables(&self, state: &Self::State) -> Vec<(&'static str, u64)>;

    /// Nominal number of states per agent, when the protocol has one.
    fn state_bound(&self) -> Option<u64> {
        None
    }

    /// Phase 4 may be left only by an agent the protocol resets. Returns
    /// true when the before/after pair is such an excused transition.
    fn may_leave_yes(&self, before: &Self::State, after: &Self::State) -> bool {
        let _ = (before, after);
        false
    }

    /// Checks the protocol's invariants after one step. The configuration
    /// before the step differs from `view.after` only at the arc endpoints.
    fn check_invariants(&self, view: &StepView<'_, Self::State>) -> Result<(), String> {
        let _ = view;
        Ok(())
    }

    /// Invariants that depend only on the configuration itself.
    fn check_configuration(&self, config: &[Self::State]) -> Result<(), String> {
        let _ = config;
        Ok(())
    }
}

/// A total map from agent index to agent state.
pub type Configuration<S> = Vec<S>;

pub fn initial_configuration<P: Protocol>(p: &P, n: usize) -> Configuration<P::State> {
    vec![p.initial_state(); n]
}

/// Applies one interaction in place. Only the two endpoints change.
#[inline]
pub fn step_in_place<P: Protocol>(p: &P, config: &mut [P::State], arc: Arc) {
    let (a, b) = p.transition(&config[arc.initiator], &config[arc.responder]);
    config[arc.initiator] = a;
    config[arc.responder] = b;
}

/// Applies one interaction and returns the successor configuration.
pub fn apply_interaction<P: Protocol>(
    p: &P,
    g: &Digraph,
    config: &[P::State],
    arc: Arc,
) -> Result<Configuration<P::State>, ProtocolError> {
    if config.len() != g.n() {
        return Err(ProtocolError::ConfigurationLength { expected: g.n(), got: config.len() });
    }
    if !g.contains(arc) {
        return Err(ProtocolError::ArcNotInGraph { arc });
    }
    let mut next = config.to_vec();
    step_in_place(p, &mut next, arc);
    Ok(next)
}

pub fn all_outputs<P: Protocol>(p: &P, config: &[P::State]) -> Vec<Output> {
    config.iter().map(|s| p.output(s)).collect()
}

/// True iff no endpoint that output yes before the interaction stops doing
/// so, except for transitions the protocol excuses (a size-driven reset).
pub fn yes_is_absorbing_check<P: Protocol>(p: &P, config: &[P::State], arc: Arc) -> bool {
    let before = (config[arc.initiator], config[arc.responder]);
    let after = p.transition(&before.0, &before.1);
    [(before.0, after.0), (before.1, after.1)]
        .iter()
        .all(|(b, a)| p.output(b) == Output::No || p.output(a) == Output::Yes || p.may_leave_yes(b, a))
}

/// Distinct states observed during a run, plus the largest value each
/// variable took.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StateCensus {
    pub distinct_states_seen: usize,
    pub per_variable_max: BTreeMap<String, u64>,
}

/// Accumulates a [`StateCensus`].
#[derive(Debug)]
pub struct CensusCollector<S> {
    seen: HashSet<S>,
    max: BTreeMap<&'static str, u64>,
}

impl<S: Copy + Eq + Hash> Default for CensusCollector<S> {
    fn default() -> Self {
        Self { seen: HashSet::new(), max: BTreeMap::new() }
    }
}

impl<S: Copy + Eq + Hash> CensusCollector<S> {
    pub fn observe<P: Protocol<State = S>>(&mut self, p: &P, s: S) {
        if self.seen.insert(s) {
            for (name, value) in p.variables(&s) {
                let slot = self.max.entry(name).or_insert(0);
                *slot = (*slot).max(value);
            }
        }
    }

    pub fn finish(&self) -> StateCensus {
        StateCensus {
            distinct_states_seen: self.seen.len(),
            per_variable_max: self.max.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}
