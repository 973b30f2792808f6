//! The doubled graph `f(G)` and mirrored executions on it.
//!
//! `f(G)` has two copies `x` and `x + n` of every node. Every arc is copied
//! into both halves, and every arc at node 0 additionally gets two cross
//! arcs that connect node 0's copies to the other half. For `n >= 2` the
//! result is never complete, yet a protocol parameterized with `n` cannot
//! tell it apart from `G`: under a mirrored schedule both copies of each
//! node always hold the state of the original node.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::TransformError;
use crate::graph::{Arc, Digraph};
use crate::protocol::{all_outputs, initial_configuration, step_in_place, Output, Protocol};

/// Builds `f(g)` on `2n` nodes.
pub fn f_transform(g: &Digraph) -> Digraph {
    let n = g.n();
    let mut arcs = Vec::with_capacity(2 * g.arc_count() + 2 * (g.out_degree(0) + g.in_degree(0)));
    for &Arc { initiator: x, responder: y } in g.arcs() {
        arcs.push(Arc::new(x, y));
        arcs.push(Arc::new(x + n, y + n));
        if x == 0 {
            arcs.push(Arc::new(0, y + n));
            arcs.push(Arc::new(n, y));
        }
        if y == 0 {
            arcs.push(Arc::new(x + n, 0));
            arcs.push(Arc::new(x, n));
        }
    }
    Digraph::new(2 * n, arcs).expect("f(G) of a valid graph is valid")
}

/// A base graph, its image under [`f_transform`] and the node correspondence
/// `x -> {x, x + n}`.
#[derive(Clone, Debug)]
pub struct MirrorPair {
    pub base: Digraph,
    pub image: Digraph,
}

impl MirrorPair {
    pub fn new(base: Digraph) -> Self {
        let image = f_transform(&base);
        Self { base, image }
    }

    pub fn copies(&self, x: usize) -> (usize, usize) {
        (x, x + self.base.n())
    }
}

/// Expands base interactions into blocks of two image interactions.
///
/// Interactions away from node 0 map to their two copy arcs. An interaction
/// at node 0 alternates, per base arc, between its copy arcs and its cross
/// arcs. The two arcs of a block touch four distinct agents, so each block
/// applies the base transition once to both copies of each endpoint and the
/// mirror invariant holds after every block. A weakly fair base schedule
/// thus covers every image arc within any two consecutive covering windows.
#[derive(Clone, Debug)]
pub struct MirrorExpander<'g> {
    base: &'g Digraph,
    cross_next: HashMap<Arc, bool>,
}

impl<'g> MirrorExpander<'g> {
    pub fn new(base: &'g Digraph) -> Self {
        Self { base, cross_next: HashMap::new() }
    }

    pub fn expand(&mut self, arc: Arc) -> Result<[Arc; 2], TransformError> {
        if !self.base.contains(arc) {
            return Err(TransformError::ArcNotInGraph(arc));
        }
        let n = self.base.n();
        let (x, y) = (arc.initiator, arc.responder);
        let copies = [Arc::new(x, y), Arc::new(x + n, y + n)];
        if x != 0 && y != 0 {
            return Ok(copies);
        }
        let cross = self.cross_next.entry(arc).or_insert(false);
        let use_cross = *cross;
        *cross = !*cross;
        if !use_cross {
            Ok(copies)
        } else if x == 0 {
            Ok([Arc::new(0, y + n), Arc::new(n, y)])
        } else {
            Ok([Arc::new(x + n, 0), Arc::new(x, n)])
        }
    }
}

/// Expands a finite base interaction sequence.
pub fn mirror_schedule(g: &Digraph, base: &[Arc]) -> Result<Vec<Arc>, TransformError> {
    let mut ex = MirrorExpander::new(g);
    let mut out = Vec::with_capacity(2 * base.len());
    for &arc in base {
        out.extend(ex.expand(arc)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorReport {
    pub protocol: String,
    pub base_n: usize,
    pub image_arcs: usize,
    pub image_is_complete: bool,
    pub base_steps: u64,
    /// The mirror invariant held after every block.
    pub held: bool,
    /// First base step after which some copy disagreed with its original.
    pub first_divergence: Option<u64>,
    /// Every arc of the image was used at least once.
    pub image_covered: bool,
    pub base_outputs: Vec<Output>,
    pub image_outputs: Vec<Output>,
}

impl MirrorReport {
    pub fn image_all_yes(&self) -> bool {
        self.image_outputs.iter().all(|&o| o == Output::Yes)
    }
}

/// Runs `p` on `g` under `base_schedule` and on `f(g)` under the mirrored
/// schedule in lockstep for `steps` base interactions, checking after each
/// block that both copies of every node match the original.
pub fn mirrored_run<P: Protocol>(
    p: &P,
    g: &Digraph,
    base_schedule: impl IntoIterator<Item = Arc>,
    steps: u64,
) -> Result<MirrorReport, TransformError> {
    let pair = MirrorPair::new(g.clone());
    let n = g.n();
    let mut base = initial_configuration(p, n);
    let mut image = initial_configuration(p, 2 * n);
    let mut ex = MirrorExpander::new(g);
    let mut used = vec![false; pair.image.arc_count()];
    let image_index: HashMap<Arc, usize> = pair.image.arcs().iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut first_divergence = None;
    let mut done = 0u64;
    for arc in base_schedule.into_iter().take(steps as usize) {
        let block = ex.expand(arc)?;
        step_in_place(p, &mut base, arc);
        for a in block {
            step_in_place(p, &mut image, a);
            used[image_index[&a]] = true;
        }
        done += 1;
        if (0..n).any(|x| image[x] != base[x] || image[x + n] != base[x]) {
            first_divergence = Some(done);
            break;
        }
    }
    Ok(MirrorReport {
        protocol: p.name().to_string(),
        base_n: n,
        image_arcs: pair.image.arc_count(),
        image_is_complete: pair.image.is_complete(),
        base_steps: done,
        held: first_divergence.is_none(),
        first_divergence,
        image_covered: used.iter().all(|&u| u),
        base_outputs: all_outputs(p, &base),
        image_outputs: all_outputs(p, &image),
    })
}
