use super::session::{RouteOutcome, RoutingSession, Unroutable};
use crate::error::{MeshError, RoutingError};
use crate::export::fingerprint;
use crate::mesh::{MeshGraph, NodeId, Path};
use crate::search::dfs_all_paths;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashListMeta {
    /// Fingerprint of the graph the paths were searched on.
    pub fingerprint: String,
    pub generator: String,
    pub inputs: Vec<NodeId>,
    pub outputs: Vec<NodeId>,
    pub pair_count: usize,
    pub path_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashEntry {
    pub input: NodeId,
    pub output: NodeId,
    /// Ascending weight, ties by node sequence.
    pub paths: Vec<Path>,
}

/// Every physical path for each input/output pair, searched once up front.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashList {
    pub meta: HashListMeta,
    /// Sorted by `(input, output)`.
    pub entries: Vec<HashEntry>,
}

impl HashList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, input: NodeId, output: NodeId) -> Option<&HashEntry> {
        self.entries
            .binary_search_by(|e| (e.input, e.output).cmp(&(input, output)))
            .ok()
            .map(|i| &self.entries[i])
    }
}

fn port(g: &MeshGraph, n: NodeId) -> Result<NodeId, RoutingError> {
    let r = g.resolve(n).ok_or(MeshError::UnknownNode(n))?;
    if r.is_dummy() {
        Ok(r)
    } else {
        Err(RoutingError::NotAPort(n))
    }
}

pub fn build_hash_list(g: &MeshGraph, inputs: &[NodeId], outputs: &[NodeId]) -> Result<HashList, RoutingError> {
    let ins = inputs.iter().map(|&n| port(g, n)).collect::<Result<Vec<_>, _>>()?;
    let outs = outputs.iter().map(|&n| port(g, n)).collect::<Result<Vec<_>, _>>()?;
    let pairs: BTreeSet<(NodeId, NodeId)> = ins
        .iter()
        .flat_map(|&i| outs.iter().map(move |&o| (i, o)))
        .filter(|(i, o)| i != o)
        .collect();
    assemble(g, pairs, ins, outs)
}

/// A hash list holding only the given pairs.
pub fn build_hash_list_for_pairs(g: &MeshGraph, pairs: &[(NodeId, NodeId)]) -> Result<HashList, RoutingError> {
    let mut set = BTreeSet::new();
    for &(i, o) in pairs {
        set.insert((port(g, i)?, port(g, o)?));
    }
    let ins: BTreeSet<NodeId> = set.iter().map(|p| p.0).collect();
    let outs: BTreeSet<NodeId> = set.iter().map(|p| p.1).collect();
    assemble(g, set, ins.into_iter().collect(), outs.into_iter().collect())
}

fn assemble(
    g: &MeshGraph,
    pairs: BTreeSet<(NodeId, NodeId)>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
) -> Result<HashList, RoutingError> {
    let mut entries = Vec::with_capacity(pairs.len());
    for (input, output) in pairs {
        let paths = dfs_all_paths(g, input, output, &BTreeSet::new())?.paths;
        entries.push(HashEntry { input, output, paths });
    }
    Ok(HashList {
        meta: HashListMeta {
            fingerprint: fingerprint(g),
            generator: "dfs_all_paths".into(),
            inputs,
            outputs,
            pair_count: entries.len(),
            path_count: entries.iter().map(|e| e.paths.len()).sum(),
        },
        entries,
    })
}

/// Takes the first stored path that avoids every engaged and blacklisted
/// node and engages it. The graph is not searched.
pub fn hash_list_route(
    list: &HashList,
    session: &mut RoutingSession,
    source: NodeId,
    target: NodeId,
) -> Result<RouteOutcome, RoutingError> {
    if list.meta.fingerprint != session.view_fingerprint() {
        return Err(RoutingError::FingerprintMismatch {
            expected: list.meta.fingerprint.clone(),
            actual: session.view_fingerprint().to_string(),
        });
    }
    let s = session.endpoint(source)?;
    let t = session.endpoint(target)?;
    let key = (*s.as_ref().unwrap_or(&source), *t.as_ref().unwrap_or(&target));
    let entry = list
        .lookup(key.0, key.1)
        .ok_or(RoutingError::PairAbsent(source, target))?;
    if let Err(why) = s.and(t) {
        return Ok(RouteOutcome::Unroutable(why));
    }
    let blocked = session.excluded();
    match entry
        .paths
        .iter()
        .find(|p| p.nodes.iter().all(|n| !blocked.contains(n)))
    {
        Some(p) => {
            let id = session.commit(p.clone());
            Ok(RouteOutcome::Routed { id, path: p.clone() })
        }
        None => Ok(RouteOutcome::Unroutable(Unroutable::NoPhysicalPath)),
    }
}
