//! Exhaustive exploration of small instances.
//!
//! Builds every configuration reachable from the all-initial configuration,
//! condenses the transition graph into strongly connected components and
//! decides correctness under global fairness: every reachable configuration
//! must be able to reach an output-stable configuration with the expected
//! output everywhere, and no reachable output-stable configuration may have
//! a different output.

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use crate::error::ModelCheckError;
use crate::graph::{Arc, Digraph};
use crate::protocol::{initial_configuration, step_in_place, Output, Protocol, StepView};

/// Default exploration cap.
pub const DEFAULT_CAP: usize = 500_000;

/// The reachable configuration graph. Node 0 is the initial configuration.
#[derive(Clone, Debug)]
pub struct ConfigGraph<S> {
    protocol: &'static str,
    k: Option<usize>,
    graph: Digraph,
    configs: Vec<Box<[S]>>,
    /// `(arc index, target)` per node, one entry per arc of the graph.
    succ: Vec<Vec<(u32, u32)>>,
    parent: Vec<Option<(u32, u32)>>,
    outputs: Vec<u32>,
    output_vectors: Vec<Vec<Output>>,
}

impl<S: Copy> ConfigGraph<S> {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn config(&self, i: usize) -> &[S] {
        &self.configs[i]
    }

    /// Successors as `(arc, target)`, in arc order.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = (Arc, usize)> + '_ {
        self.succ[i].iter().map(|&(a, t)| (self.graph.arcs()[a as usize], t as usize))
    }

    pub fn outputs(&self, i: usize) -> &[Output] {
        &self.output_vectors[self.outputs[i] as usize]
    }

    /// Arcs leading from the initial configuration to node `i`.
    pub fn path_to(&self, mut i: usize) -> Vec<Arc> {
        let mut path = Vec::new();
        while let Some((prev, arc)) = self.parent[i] {
            path.push(self.graph.arcs()[arc as usize]);
            i = prev as usize;
        }
        path.reverse();
        path
    }

    /// Distinct agent states over all reachable configurations.
    pub fn agent_states(&self) -> HashSet<S>
    where
        S: Eq + std::hash::Hash,
    {
        self.configs.iter().flat_map(|c| c.iter().copied()).collect()
    }
}

/// Breadth-first closure from the initial configuration.
///
/// Every explored configuration and transition is run through the
/// protocol's invariant checks, and the number of distinct agent states is
/// compared with [`Protocol::state_bound`]. Fails with
/// [`ModelCheckError::TooLarge`] once more than `cap` configurations are found.
pub fn explore<P: Protocol>(p: &P, g: &Digraph, cap: usize) -> Result<ConfigGraph<P::State>, ModelCheckError> {
    let init = initial_configuration(p, g.n()).into_boxed_slice();
    let mut cg = ConfigGraph {
        protocol: p.name(),
        k: p.params().k,
        graph: g.clone(),
        configs: Vec::new(),
        succ: Vec::new(),
        parent: Vec::new(),
        outputs: Vec::new(),
        output_vectors: Vec::new(),
    };
    let mut index: HashMap<Box<[P::State]>, u32> = HashMap::new();
    let mut output_ids: HashMap<Vec<Output>, u32> = HashMap::new();
    let mut agent_states: HashSet<P::State> = HashSet::new();
    let bound = p.state_bound();

    let mut add = |cg: &mut ConfigGraph<P::State>,
                   c: Box<[P::State]>,
                   parent: Option<(u32, u32)>|
     -> Result<u32, ModelCheckError> {
        if cg.configs.len() >= cap {
            return Err(ModelCheckError::TooLarge { cap });
        }
        if let Err(e) = p.check_configuration(&c) {
            return Err(ModelCheckError::Invariant(e));
        }
        for s in c.iter() {
            agent_states.insert(*s);
        }
        if let Some(b) = bound {
            if agent_states.len() as u64 > b {
                return Err(ModelCheckError::StateBound(format!(
                    "{} distinct agent states exceed {b}",
                    agent_states.len()
                )));
            }
        }
        let outs: Vec<Output> = c.iter().map(|s| p.output(s)).collect();
        let next_id = output_ids.len() as u32;
        let oid = *output_ids.entry(outs.clone()).or_insert_with(|| {
            cg.output_vectors.push(outs);
            next_id
        });
        let id = cg.configs.len() as u32;
        cg.configs.push(c);
        cg.succ.push(Vec::new());
        cg.parent.push(parent);
        cg.outputs.push(oid);
        Ok(id)
    };

    index.insert(init.clone(), 0);
    add(&mut cg, init, None)?;
    let mut queue = VecDeque::from([0u32]);
    let arcs = g.arcs();
    let mut scratch: Vec<P::State> = Vec::with_capacity(g.n());
    while let Some(cur) = queue.pop_front() {
        let mut edges = Vec::with_capacity(arcs.len());
        for (ai, &arc) in arcs.iter().enumerate() {
            let from = &cg.configs[cur as usize];
            scratch.clear();
            scratch.extend_from_slice(from);
            let before = (from[arc.initiator], from[arc.responder]);
            step_in_place(p, &mut scratch, arc);
            let view = StepView { arc, before, after: &scratch };
            if let Err(e) = p.check_invariants(&view) {
                return Err(ModelCheckError::Invariant(format!("{e} (via {arc})")));
            }
            let target = match index.get(scratch.as_slice()) {
                Some(&t) => t,
                None => {
                    let boxed: Box<[P::State]> = scratch.clone().into_boxed_slice();
                    let t = add(&mut cg, boxed.clone(), Some((cur, ai as u32)))?;
                    index.insert(boxed, t);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((ai as u32, target));
        }
        cg.succ[cur as usize] = edges;
    }
    Ok(cg)
}

/// Output-stability of every node, from the SCC condensation.
///
/// A node is output-stable iff every node reachable from it has the same
/// output vector.
pub fn output_stable<S: Copy>(cg: &ConfigGraph<S>) -> Vec<bool> {
    let (scc_of, _, uniform) = condense(cg);
    scc_of.iter().map(|&c| uniform[c].is_some()).collect()
}

/// Returns the SCC of every node, the SCCs sinks-first, and each SCC's
/// common output id when everything reachable from it shares one.
fn condense<S: Copy>(cg: &ConfigGraph<S>) -> (Vec<usize>, Vec<Vec<usize>>, Vec<Option<u32>>) {
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(cg.len(), cg.len() * cg.graph.arc_count());
    for _ in 0..cg.len() {
        dg.add_node(());
    }
    for (i, edges) in cg.succ.iter().enumerate() {
        for &(_, t) in edges {
            if t as usize != i {
                dg.add_edge(NodeIndex::new(i), NodeIndex::new(t as usize), ());
            }
        }
    }
    // tarjan_scc yields components in reverse topological order
    let sccs: Vec<Vec<usize>> =
        tarjan_scc(&dg).into_iter().map(|c| c.into_iter().map(|x| x.index()).collect()).collect();
    let mut scc_of = vec![0usize; cg.len()];
    for (ci, comp) in sccs.iter().enumerate() {
        for &v in comp {
            scc_of[v] = ci;
        }
    }
    let mut uniform: Vec<Option<u32>> = vec![None; sccs.len()];
    for (ci, comp) in sccs.iter().enumerate() {
        let out = cg.outputs[comp[0]];
        let mut ok = comp.iter().all(|&v| cg.outputs[v] == out);
        'members: for &v in comp {
            if !ok {
                break;
            }
            for &(_, t) in &cg.succ[v] {
                let tc = scc_of[t as usize];
                if tc != ci && uniform[tc] != Some(out) {
                    ok = false;
                    break 'members;
                }
            }
        }
        uniform[ci] = ok.then_some(out);
    }
    (scc_of, sccs, uniform)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A reachable configuration from which no correct stable one is reachable.
    CannotReachCorrect,
    /// A reachable output-stable configuration with a wrong output.
    WrongStable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub protocol: String,
    pub graph: String,
    pub n: usize,
    pub k: Option<usize>,
    pub expected: Output,
    pub solves: bool,
    pub reachable_count: usize,
    pub stable_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_kind: Option<WitnessKind>,
    /// Interactions from the initial configuration to the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<Vec<Arc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_configuration: Option<serde_json::Value>,
}

impl Verdict {
    pub fn labeled(mut self, graph: impl Into<String>) -> Self {
        self.graph = graph.into();
        self
    }
}

/// Decides correctness under global fairness for one expected output.
pub fn check_global_fairness<S: Copy + Serialize>(cg: &ConfigGraph<S>, expected: Output) -> Verdict {
    let (scc_of, sccs, uniform) = condense(cg);
    let n = cg.graph.n();
    let all_expected = |oid: u32| cg.output_vectors[oid as usize].iter().all(|&o| o == expected);

    let stable_count = scc_of.iter().filter(|&&c| uniform[c].is_some()).count();
    let mut good = vec![false; sccs.len()];
    for (ci, comp) in sccs.iter().enumerate() {
        good[ci] = uniform[ci].is_some_and(all_expected)
            || comp.iter().any(|&v| cg.succ[v].iter().any(|&(_, t)| good[scc_of[t as usize]]));
    }

    let wrong_stable = (0..cg.len()).find(|&v| uniform[scc_of[v]].is_some_and(|o| !all_expected(o)));
    let stuck = (0..cg.len()).find(|&v| !good[scc_of[v]]);
    let witness = match (wrong_stable, stuck) {
        (Some(v), _) => Some((WitnessKind::WrongStable, v)),
        (None, Some(v)) => Some((WitnessKind::CannotReachCorrect, v)),
        (None, None) => None,
    };
    Verdict {
        protocol: cg.protocol.to_string(),
        graph: String::new(),
        n,
        k: cg.k,
        expected,
        solves: witness.is_none(),
        reachable_count: cg.len(),
        stable_count,
        witness_kind: witness.map(|w| w.0),
        witness_path: witness.map(|(_, v)| cg.path_to(v)),
        witness_configuration: witness.map(|(_, v)| serde_json::to_value(cg.config(v)).expect("states serialize")),
    }
}

/// True iff no reachable configuration contains an agent satisfying the
/// positive certificate. This covers every schedule at once, weakly fair
/// ones included.
pub fn check_weak_fairness_negative<P: Protocol>(p: &P, g: &Digraph, cap: usize) -> Result<bool, ModelCheckError> {
    let cg = explore(p, g, cap)?;
    let n = g.n();
    Ok(cg.configs.iter().all(|c| c.iter().all(|s| !p.certified(s, n))))
}
