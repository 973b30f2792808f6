use thiserror::Error;

use crate::graph::GraphDefect;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(GraphDefect),
    #[error("bad generator parameter: {0}")]
    Parameter(String),
}

impl From<GraphDefect> for GraphError {
    fn from(d: GraphDefect) -> Self {
        GraphError::Invalid(d)
    }
}

/// Errors from the line-oriented graph file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed line {line}: {content:?}")]
    Malformed { line: usize, content: String },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("node index out of range (n = {n}) at line {line}")]
    OutOfRange { line: usize, n: usize },
    #[error("duplicate arc at line {line}")]
    Duplicate { line: usize },
    #[error("missing node count")]
    Empty,
    #[error(transparent)]
    Invalid(GraphError),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("group count k = {k} must lie in [1, n] with n = {n}")]
    GroupCount { n: usize, k: usize },
    #[error("population size n = {0} must be at least 2")]
    Population(usize),
    #[error("arc {arc} is not in the communication graph")]
    ArcNotInGraph { arc: crate::graph::Arc },
    #[error("configuration has {got} agents, graph has {expected}")]
    ConfigurationLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("non-positive value in regression input: ({0}, {1})")]
    NonPositive(f64, f64),
    #[error("singular linear system")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelCheckError {
    #[error("instance too large: more than {cap} reachable configurations")]
    TooLarge { cap: usize },
    #[error("state bound violated during exploration: {0}")]
    StateBound(String),
    #[error("invariant violated at a reachable configuration: {0}")]
    Invariant(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("base arc {0} is not in the graph")]
    ArcNotInGraph(crate::graph::Arc),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
