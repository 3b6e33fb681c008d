use crate::mesh::{NodeId, UnitId};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty node name")]
    Empty,
    #[error("invalid circle '{0}' (expected one of i, o, s)")]
    Circle(String),
    #[error("invalid letter '{0}' (expected a..h)")]
    Letter(String),
    #[error("invalid unit index '{0}'")]
    UnitIndex(String),
    #[error("invalid cell index '{0}'")]
    CellIndex(String),
    #[error("ambiguous compact name '{0}': use the delimited form c.l.unit.cell")]
    Ambiguous(String),
    #[error("malformed node name '{0}'")]
    Malformed(String),
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown unit {0}")]
    UnknownUnit(UnitId),
    #[error("duplicate unit {0}")]
    DuplicateUnit(UnitId),
    #[error("nodes {0} and {1} are not adjacent")]
    NotAdjacent(NodeId, NodeId),
    #[error("path does not traverse unit {0}")]
    UnitNotTraversed(UnitId),
    #[error("colliding nodes: {}", join(.0))]
    Collision(Vec<NodeId>),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("unsupported switch fabric: {0}")]
    UnsupportedFabric(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("graph format error: {0}")]
    Format(String),
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("source equals target ({0}); use a cycle search instead")]
    SourceIsTarget(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("{0} is a primary node; searches start and end at ports (letters e..h)")]
    NotAPort(NodeId),
    #[error("endpoint {0} is in the visited list")]
    EndpointVisited(NodeId),
    #[error("required weight must be at least 1, got {0}")]
    InvalidWeight(i64),
}

#[derive(Debug, Error)]
pub enum RoutingError {
    #[error("path overlaps engaged nodes: {}", join(.0))]
    Overlap(Vec<NodeId>),
    #[error("unknown request id {0}")]
    UnknownRequest(u64),
    #[error("pair ({0}, {1}) is not in the hash list")]
    PairAbsent(NodeId, NodeId),
    #[error("hash list was generated for a different graph (fingerprint {expected}, graph {actual})")]
    FingerprintMismatch { expected: String, actual: String },
    #[error("{0} is not a port node")]
    NotAPort(NodeId),
    #[error("penalty must be at least 1")]
    InvalidPenalty,
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("snapshot error: {0}")]
    Snapshot(String),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no reachable source/target pair could be sampled")]
    NoReachablePair,
    #[error("invalid bench configuration: {0}")]
    Config(String),
    #[error("report has no rows")]
    EmptyReport,
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
}

fn join(nodes: &[NodeId]) -> String {
    nodes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
}
