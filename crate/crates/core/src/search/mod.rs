//! Path and cycle searches over a [`MeshGraph`].
//!
//! Every search starts and ends at port nodes (letters `e..h`) and treats
//! `initial_visited` as already used. Neighbours are expanded in canonical
//! node order, so results and tie-breaks are reproducible.

mod bidir;
mod dfs;
mod dijkstra;

pub use bidir::{bidirectional_shortest, BidirOutcome};
pub use dijkstra::dijkstra_baseline;

use crate::error::SearchError;
use crate::mesh::{MeshGraph, NodeId, Path};
use dfs::Engine;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    AllPaths,
    Shortest,
    FixedWeight(i64),
    Cycles,
    ShortestCycle,
    FixedWeightCycle(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRequest {
    pub source: NodeId,
    /// Ignored by the cycle modes, which start and end at `source`.
    pub target: NodeId,
    #[serde(default)]
    pub initial_visited: BTreeSet<NodeId>,
    pub mode: SearchMode,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

/// Paths sorted by weight, ties by node sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    pub paths: Vec<Path>,
    pub stats: SearchStats,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn shortest(&self) -> Option<&Path> {
        self.paths.first()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.paths.iter().map(|p| p.total_weight).collect()
    }
}

/// A closed path through a parent node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    /// Closed sequence starting and ending at the parent, in canonical orientation.
    pub path: Path,
    /// The open sequence, read in whichever direction is lexicographically
    /// smaller. Two searches that find the same loop in opposite directions
    /// produce the same key.
    pub canonical_key: Vec<NodeId>,
}

impl Cycle {
    fn from_closed(nodes: Vec<NodeId>, weight: i64) -> Cycle {
        let key = canonical_key(&nodes);
        let mut closed = key.clone();
        closed.push(key[0]);
        Cycle {
            path: Path::with_weight(closed, weight),
            canonical_key: key,
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.path.nodes
    }

    pub fn total_weight(&self) -> i64 {
        self.path.total_weight
    }

    pub fn parent(&self) -> NodeId {
        self.path.nodes[0]
    }
}

/// Orientation-invariant key of a closed sequence; the parent stays first.
pub fn canonical_key(closed: &[NodeId]) -> Vec<NodeId> {
    let body = &closed[..closed.len() - 1];
    let mut rev = Vec::with_capacity(body.len());
    rev.push(body[0]);
    rev.extend(body[1..].iter().rev());
    if rev.as_slice() < body {
        rev
    } else {
        body.to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSet {
    pub cycles: Vec<Cycle>,
    /// Cycles found before removing reversed duplicates.
    pub raw_count: usize,
    pub stats: SearchStats,
}

impl CycleSet {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.cycles.iter().map(|c| c.total_weight()).collect()
    }
}

pub(crate) struct Prepared {
    pub source: u32,
    pub target: u32,
    pub mask: Vec<bool>,
}

fn check_port(g: &MeshGraph, n: NodeId) -> Result<u32, SearchError> {
    let r = g.resolve(n).ok_or(SearchError::UnknownNode(n))?;
    if !r.is_dummy() {
        return Err(SearchError::NotAPort(n));
    }
    Ok(g.idx(r).expect("resolved node is indexed"))
}

pub(crate) fn prepare(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    visited: &BTreeSet<NodeId>,
) -> Result<Prepared, SearchError> {
    let s = check_port(g, source)?;
    let t = check_port(g, target)?;
    if s == t {
        return Err(SearchError::SourceIsTarget(source));
    }
    let mask = g.mask_of(visited);
    for (i, n) in [(s, source), (t, target)] {
        if mask[i as usize] {
            return Err(SearchError::EndpointVisited(n));
        }
    }
    Ok(Prepared {
        source: s,
        target: t,
        mask,
    })
}

fn prepare_parent(g: &MeshGraph, parent: NodeId, visited: &BTreeSet<NodeId>) -> Result<(u32, Vec<bool>), SearchError> {
    let p = check_port(g, parent)?;
    let mask = g.mask_of(visited);
    if mask[p as usize] {
        return Err(SearchError::EndpointVisited(parent));
    }
    Ok((p, mask))
}

fn to_path(g: &MeshGraph, idx: &[u32], w: i64) -> Path {
    Path::with_weight(idx.iter().map(|&i| g.id_at(i)).collect(), w)
}

fn sort_paths(paths: &mut [Path]) {
    paths.sort_by(|a, b| a.total_weight.cmp(&b.total_weight).then_with(|| a.nodes.cmp(&b.nodes)));
}

/// Every simple physical path from `source` to `target`.
pub fn dfs_all_paths(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    initial_visited: &BTreeSet<NodeId>,
) -> Result<PathSet, SearchError> {
    let t0 = Instant::now();
    let p = prepare(g, source, target, initial_visited)?;
    let mut e = Engine::new(g, p.mask);
    e.path.push(p.source);
    let mut raw = Vec::new();
    e.all_paths(0, p.target, &mut raw);
    let mut paths: Vec<Path> = raw.iter().map(|(v, w)| to_path(g, v, *w)).collect();
    sort_paths(&mut paths);
    Ok(PathSet {
        paths,
        stats: SearchStats {
            nodes_expanded: e.expanded,
            elapsed: t0.elapsed(),
        },
    })
}

/// Minimum-weight physical path; the lexicographically smallest among ties.
pub fn dfs_shortest_path(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    initial_visited: &BTreeSet<NodeId>,
) -> Result<Option<Path>, SearchError> {
    Ok(shortest_with_stats(g, source, target, initial_visited)?.0)
}

pub fn shortest_with_stats(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    initial_visited: &BTreeSet<NodeId>,
) -> Result<(Option<Path>, SearchStats), SearchError> {
    let t0 = Instant::now();
    let p = prepare(g, source, target, initial_visited)?;
    let mut e = Engine::new(g, p.mask);
    e.path.push(p.source);
    let mut best = None;
    e.shortest(0, p.target, &mut best);
    let stats = SearchStats {
        nodes_expanded: e.expanded,
        elapsed: t0.elapsed(),
    };
    Ok((best.map(|(v, w)| to_path(g, &v, w)), stats))
}

/// A physical path of weight exactly `weight`, the first in expansion order.
pub fn dfs_fixed_weight_path(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    initial_visited: &BTreeSet<NodeId>,
    weight: i64,
) -> Result<Option<Path>, SearchError> {
    if weight < 1 {
        return Err(SearchError::InvalidWeight(weight));
    }
    let p = prepare(g, source, target, initial_visited)?;
    let mut e = Engine::new(g, p.mask);
    e.path.push(p.source);
    Ok(e.fixed(0, p.target, weight).map(|v| to_path(g, &v, weight)))
}

/// All physical cycles through `parent`, each reported once.
pub fn dfs_cycles(g: &MeshGraph, parent: NodeId, initial_visited: &BTreeSet<NodeId>) -> Result<CycleSet, SearchError> {
    let t0 = Instant::now();
    let (p, mask) = prepare_parent(g, parent, initial_visited)?;
    let mut e = Engine::new(g, mask);
    e.path.push(p);
    let mut raw = Vec::new();
    e.cycles(0, p, &mut raw);
    let raw_count = raw.len();
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for (v, w) in raw {
        let c = Cycle::from_closed(v.iter().map(|&i| g.id_at(i)).collect(), w);
        if seen.insert(c.canonical_key.clone()) {
            cycles.push(c);
        }
    }
    cycles.sort_by(|a, b| {
        a.total_weight()
            .cmp(&b.total_weight())
            .then_with(|| a.canonical_key.cmp(&b.canonical_key))
    });
    Ok(CycleSet {
        cycles,
        raw_count,
        stats: SearchStats {
            nodes_expanded: e.expanded,
            elapsed: t0.elapsed(),
        },
    })
}

pub fn dfs_shortest_cycle(
    g: &MeshGraph,
    parent: NodeId,
    initial_visited: &BTreeSet<NodeId>,
) -> Result<Option<Cycle>, SearchError> {
    let (p, mask) = prepare_parent(g, parent, initial_visited)?;
    let mut e = Engine::new(g, mask);
    e.path.push(p);
    let mut best = None;
    e.shortest_cycle(0, p, &mut best);
    Ok(best.map(|(v, w)| Cycle::from_closed(v.iter().map(|&i| g.id_at(i)).collect(), w)))
}

pub fn dfs_fixed_weight_cycle(
    g: &MeshGraph,
    parent: NodeId,
    initial_visited: &BTreeSet<NodeId>,
    weight: i64,
) -> Result<Option<Cycle>, SearchError> {
    if weight < 1 {
        return Err(SearchError::InvalidWeight(weight));
    }
    let (p, mask) = prepare_parent(g, parent, initial_visited)?;
    let mut e = Engine::new(g, mask);
    e.path.push(p);
    Ok(e.fixed_cycle(0, p, weight)
        .map(|v| Cycle::from_closed(v.iter().map(|&i| g.id_at(i)).collect(), weight)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    Paths(PathSet),
    Path(Option<Path>),
    Cycles(CycleSet),
    Cycle(Option<Cycle>),
}

impl SearchRequest {
    pub fn run(&self, g: &MeshGraph) -> Result<SearchOutcome, SearchError> {
        let v = &self.initial_visited;
        Ok(match self.mode {
            SearchMode::AllPaths => SearchOutcome::Paths(dfs_all_paths(g, self.source, self.target, v)?),
            SearchMode::Shortest => SearchOutcome::Path(dfs_shortest_path(g, self.source, self.target, v)?),
            SearchMode::FixedWeight(w) => {
                SearchOutcome::Path(dfs_fixed_weight_path(g, self.source, self.target, v, w)?)
            }
            SearchMode::Cycles => SearchOutcome::Cycles(dfs_cycles(g, self.source, v)?),
            SearchMode::ShortestCycle => SearchOutcome::Cycle(dfs_shortest_cycle(g, self.source, v)?),
            SearchMode::FixedWeightCycle(w) => SearchOutcome::Cycle(dfs_fixed_weight_cycle(g, self.source, v, w)?),
        })
    }
}
