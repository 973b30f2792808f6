//! Directed communication graphs.
//!
//! Agents are dense 0-based indices. A [`Digraph`] built through
//! [`Digraph::new`] is simple, self-loop free, weakly connected and has at
//! least two nodes; [`Digraph::raw`] skips those checks so that broken inputs
//! can still be handed to [`Digraph::validate`].

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, ParseError};

/// Index of an agent in `[0, n)`.
pub type NodeId = usize;

/// An ordered pair of agents that may interact, initiator first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub initiator: NodeId,
    pub responder: NodeId,
}

impl Arc {
    pub const fn new(initiator: NodeId, responder: NodeId) -> Self {
        Self { initiator, responder }
    }
}

impl From<(NodeId, NodeId)> for Arc {
    fn from((u, v): (NodeId, NodeId)) -> Self {
        Arc::new(u, v)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.initiator, self.responder)
    }
}

/// First property a candidate graph violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDefect {
    TooFewNodes(usize),
    NodeOutOfRange(Arc),
    SelfLoop(Arc),
    DuplicateArc(Arc),
    NotWeaklyConnected,
}

impl fmt::Display for GraphDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphDefect::TooFewNodes(n) => write!(f, "too few nodes: {n} (need at least 2)"),
            GraphDefect::NodeOutOfRange(a) => write!(f, "node out of range in arc {a}"),
            GraphDefect::SelfLoop(a) => write!(f, "self-loop {a}"),
            GraphDefect::DuplicateArc(a) => write!(f, "duplicate arc {a}"),
            GraphDefect::NotWeaklyConnected => write!(f, "not weakly connected"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    lookup: HashSet<Arc>,
}

impl Digraph {
    /// Builds a validated graph. Arcs are stored in lexicographic order.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self, GraphError> {
        let g = Self::raw(n, arcs);
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph without validation. Duplicates are kept so that
    /// [`validate`](Self::validate) can report them.
    pub fn raw(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Self {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        arcs.sort_unstable();
        let lookup = arcs.iter().copied().collect();
        Self { n, arcs, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains(&self, arc: Arc) -> bool {
        self.lookup.contains(&arc)
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.arcs.iter().filter(|a| a.initiator == v).count()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.arcs.iter().filter(|a| a.responder == v).count()
    }

    /// Checks `n >= 2`, range, self-loops, duplicates and weak connectivity,
    /// in that order, and reports the first violation.
    pub fn validate(&self) -> Result<(), GraphDefect> {
        if self.n < 2 {
            return Err(GraphDefect::TooFewNodes(self.n));
        }
        let mut seen = HashSet::with_capacity(self.arcs.len());
        for &a in &self.arcs {
            if a.initiator >= self.n || a.responder >= self.n {
                return Err(GraphDefect::NodeOutOfRange(a));
            }
            if a.initiator == a.responder {
                return Err(GraphDefect::SelfLoop(a));
            }
            if !seen.insert(a) {
                return Err(GraphDefect::DuplicateArc(a));
            }
        }
        if !self.weakly_connected() {
            return Err(GraphDefect::NotWeaklyConnected);
        }
        Ok(())
    }

    fn weakly_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for a in &self.arcs {
            adj[a.initiator].push(a.responder);
            adj[a.responder].push(a.initiator);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Every ordered pair of distinct agents is an arc.
    pub fn is_complete(&self) -> bool {
        self.lookup.len() == self.n * (self.n - 1)
    }

    /// One undirected edge per arc, so a bidirected pair appears twice.
    pub fn to_undirected_multigraph(&self) -> UndirectedMultigraph {
        let edges = self.arcs.iter().map(|a| (a.initiator.min(a.responder), a.initiator.max(a.responder))).collect();
        UndirectedMultigraph { n: self.n, edges }
    }

    pub fn read_from(reader: impl BufRead) -> Result<Self, ParseError> {
        let mut n: Option<usize> = None;
        let mut arcs = Vec::new();
        let mut seen = HashSet::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| ParseError::Io(e.to_string()))?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| ParseError::Malformed { line: line_no, content: text.to_string() })
            };
            match (n, fields.as_slice()) {
                (None, [count]) => n = Some(parse(count)?),
                (Some(n), [u, v]) => {
                    let arc = Arc::new(parse(u)?, parse(v)?);
                    if arc.initiator >= n || arc.responder >= n {
                        return Err(ParseError::OutOfRange { line: line_no, n });
                    }
                    if arc.initiator == arc.responder {
                        return Err(ParseError::SelfLoop { line: line_no });
                    }
                    if !seen.insert(arc) {
                        return Err(ParseError::Duplicate { line: line_no });
                    }
                    arcs.push(arc);
                }
                _ => return Err(ParseError::Malformed { line: line_no, content: text.to_string() }),
            }
        }
        let n = n.ok_or(ParseError::Empty)?;
        Digraph::new(n, arcs).map_err(ParseError::Invalid)
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.n)?;
        for a in &self.arcs {
            writeln!(w, "{} {}", a.initiator, a.responder)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("graph text is ascii")
    }

    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        Self::read_from(text.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ParseError> {
        let file = std::fs::File::open(path).map_err(|e| ParseError::Io(e.to_string()))?;
        Self::read_from(std::io::BufReader::new(file))
    }

    pub fn save(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }
}

/// The undirected multigraph obtained by forgetting arc orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedMultigraph {
    pub n: usize,
    /// Unordered pairs stored as `(min, max)`; a pair may occur twice.
    pub edges: Vec<(NodeId, NodeId)>,
}

impl UndirectedMultigraph {
    /// Builds a multigraph from explicit edges (used for non-derived fixtures).
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Self { n, edges }
    }

    /// Symmetric matrix of edge multiplicities.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0u32; self.n]; self.n];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            m[v][u] += 1;
        }
        m
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Multiplicity of the unordered pair `{u, v}`.
    pub fn multiplicity(&self, u: NodeId, v: NodeId) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.iter().filter(|&&e| e == key).count()
    }
}

/// Graph families used as fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GraphKind {
    Complete,
    DirectedRing,
    DirectedLine,
    StarBidir,
    NearCompleteMinusOneArc,
    RandomWeaklyConnected,
}

impl GraphKind {
    pub const ALL: [GraphKind; 6] = [
        GraphKind::Complete,
        GraphKind::DirectedRing,
        GraphKind::DirectedLine,
        GraphKind::StarBidir,
        GraphKind::NearCompleteMinusOneArc,
        GraphKind::RandomWeaklyConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::DirectedRing => "directed_ring",
            GraphKind::DirectedLine => "directed_line",
            GraphKind::StarBidir => "star_bidir",
            GraphKind::NearCompleteMinusOneArc => "near_complete_minus_one_arc",
            GraphKind::RandomWeaklyConnected => "random_weakly_connected",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generates a fixture graph. `seed` only matters for the seeded kinds.
///
/// At `n = 2` a directed ring, a bidirected star and a random graph (whose
/// spanning tree is bidirected) all coincide with `K_2`. For `n >= 3` every
/// kind other than `Complete` is non-complete.
pub fn generate(kind: GraphKind, n: usize, seed: u64) -> Result<Digraph, GraphError> {
    if n < 2 {
        return Err(GraphError::Parameter(format!("{kind} needs n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<Arc> = match kind {
        GraphKind::Complete => complete_arcs(n).collect(),
        GraphKind::DirectedRing => (0..n).map(|i| Arc::new(i, (i + 1) % n)).collect(),
        GraphKind::DirectedLine => (0..n - 1).map(|i| Arc::new(i, i + 1)).collect(),
        GraphKind::StarBidir => (1..n).flat_map(|i| [Arc::new(0, i), Arc::new(i, 0)]).collect(),
        GraphKind::NearCompleteMinusOneArc => {
            let mut all: Vec<Arc> = complete_arcs(n).collect();
            let drop = rng.random_range(0..all.len());
            all.swap_remove(drop);
            all
        }
        GraphKind::RandomWeaklyConnected => random_weakly_connected(n, &mut rng),
    };
    Digraph::new(n, arcs)
}

fn complete_arcs(n: usize) -> impl Iterator<Item = Arc> {
    (0..n).flat_map(move |u| (0..n).filter(move |&v| v != u).map(move |v| Arc::new(u, v)))
}

/// Random spanning tree with both directions on every tree edge, plus each
/// remaining ordered pair with probability 1/2. For `n >= 3` one non-tree arc
/// is dropped if the coin flips produced the complete graph.
fn random_weakly_connected(n: usize, rng: &mut ChaCha8Rng) -> Vec<Arc> {
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(rng);
    let mut present = HashSet::new();
    let mut tree = HashSet::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        let child = order[i];
        for a in [Arc::new(parent, child), Arc::new(child, parent)] {
            present.insert(a);
            tree.insert(a);
        }
    }
    for a in complete_arcs(n) {
        if !present.contains(&a) && rng.random_bool(0.5) {
            present.insert(a);
        }
    }
    if n >= 3 && present.len() == n * (n - 1) {
        let mut extra: Vec<Arc> = present.difference(&tree).copied().collect();
        extra.sort_unstable();
        let victim = extra[rng.random_range(0..extra.len())];
        present.remove(&victim);
    }
    let mut arcs: Vec<Arc> = present.into_iter().collect();
    arcs.sort_unstable();
    arcs
}
