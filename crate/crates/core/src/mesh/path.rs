use super::graph::MeshGraph;
use super::ids::{NodeId, UnitId};
use super::unit::UnitState;
use crate::error::MeshError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

/// A node sequence through the mesh together with what it implies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub total_weight: i64,
    /// Number of primary-to-primary crossings. A unit passed twice (once on
    /// each lane pair) counts twice.
    pub units_traversed: usize,
    pub states_implied: BTreeMap<UnitId, UnitState>,
}

impl Path {
    pub fn new(graph: &MeshGraph, nodes: Vec<NodeId>) -> Result<Path, MeshError> {
        let total_weight = path_weight(graph, &nodes)?;
        Ok(Self::with_weight(nodes, total_weight))
    }

    pub(crate) fn with_weight(nodes: Vec<NodeId>, total_weight: i64) -> Path {
        let mut units_traversed = 0;
        let mut states_implied = BTreeMap::new();
        for w in nodes.windows(2) {
            if let Some((unit, st)) = crossing(w[0], w[1]) {
                units_traversed += 1;
                states_implied.entry(unit).or_insert(st);
            }
        }
        Path {
            nodes,
            total_weight,
            units_traversed,
            states_implied,
        }
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths are nonempty")
    }

    pub fn is_closed(&self) -> bool {
        self.nodes.len() > 1 && self.nodes.first() == self.nodes.last()
    }

    pub fn units(&self) -> impl Iterator<Item = UnitId> + '_ {
        self.states_implied.keys().copied()
    }

    pub fn is_physical(&self) -> bool {
        is_physical(&self.nodes)
    }

    pub fn compact(&self) -> String {
        self.nodes
            .iter()
            .map(|n| n.compact().unwrap_or_else(|| n.to_string()))
            .collect::<Vec<_>>()
            .join("-")
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
        write!(f, "{} (weight {})", names.join(" "), self.total_weight)
    }
}

/// The unit and state implied by stepping between two primaries of one unit.
fn crossing(x: NodeId, y: NodeId) -> Option<(UnitId, UnitState)> {
    if x.is_primary() && y.is_primary() && x.unit_id() == y.unit_id() {
        UnitState::of_crossing(x.letter, y.letter).map(|s| (x.unit_id(), s))
    } else {
        None
    }
}

pub fn path_weight(graph: &MeshGraph, nodes: &[NodeId]) -> Result<i64, MeshError> {
    if let Some(&n) = nodes.iter().find(|n| !graph.contains(**n)) {
        return Err(MeshError::UnknownNode(n));
    }
    nodes.windows(2).try_fold(0i64, |acc, w| {
        graph
            .weight(w[0], w[1])
            .map(|e| acc + e)
            .ok_or(MeshError::NotAdjacent(w[0], w[1]))
    })
}

fn same_unit_primaries(x: NodeId, y: NodeId) -> bool {
    x.is_primary() && y.is_primary() && x.unit_id() == y.unit_id()
}

/// Structural physicality check, independent of edge weights.
///
/// A sequence is physical when no node repeats (a closed sequence may end on
/// its first node), every step between two primaries of one unit crosses from
/// the `a,b` side to the `c,d` side, and no three consecutive nodes are
/// primaries of the same unit. Closed sequences are checked cyclically.
pub fn is_physical(nodes: &[NodeId]) -> bool {
    let closed = nodes.len() > 1 && nodes.first() == nodes.last();
    let body = if closed { &nodes[..nodes.len() - 1] } else { nodes };
    if closed && body.len() < 3 {
        return false;
    }
    let mut seen = HashSet::with_capacity(body.len());
    if !body.iter().all(|n| seen.insert(*n)) {
        return false;
    }
    let n = body.len();
    let at = |i: usize| body[i % n];
    let steps = if closed { n } else { n.saturating_sub(1) };
    for i in 0..steps {
        let (x, y) = (at(i), at(i + 1));
        if same_unit_primaries(x, y) && UnitState::of_crossing(x.letter, y.letter).is_none() {
            return false;
        }
    }
    let triples = if closed { n } else { n.saturating_sub(2) };
    (0..triples).all(|i| !(same_unit_primaries(at(i), at(i + 1)) && same_unit_primaries(at(i + 1), at(i + 2))))
}

/// State the path puts `unit` in.
pub fn unit_state_of(path: &Path, unit: UnitId) -> Result<UnitState, MeshError> {
    path.nodes
        .windows(2)
        .filter_map(|w| crossing(w[0], w[1]))
        .find(|(u, _)| *u == unit)
        .map(|(_, s)| s)
        .ok_or(MeshError::UnitNotTraversed(unit))
}
