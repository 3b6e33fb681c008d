use super::session::RoutingSession;
use crate::error::RoutingError;
use crate::mesh::{MeshGraph, NodeId, Path, UnitId, UnitState};
use crate::topology::SwitchFabric;
use itertools::Itertools;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Pair orders tried per permutation before giving up on it.
const MAX_ORDERS: usize = 720;

#[derive(Clone, Debug, Default)]
pub struct FabricEnumeration {
    /// Realisable permutations (`p[i]` is the output line of input `i`) with
    /// the routes that realise them.
    pub permutations: BTreeMap<Vec<usize>, Vec<Path>>,
    /// Candidate permutations that were not realised.
    pub failed: Vec<Vec<usize>>,
    pub route_multi_calls: usize,
}

/// Joint switch settings of a set of paths, or `None` if two paths set a
/// switch differently.
fn joint_states<'a>(paths: impl IntoIterator<Item = &'a Path>) -> Option<BTreeMap<UnitId, UnitState>> {
    let mut out = BTreeMap::new();
    for p in paths {
        for (&u, &s) in &p.states_implied {
            if *out.entry(u).or_insert(s) != s {
                return None;
            }
        }
    }
    Some(out)
}

/// Every input-to-output permutation the fabric can realise.
///
/// Each candidate permutation is routed as `n` pairs with
/// [`RoutingSession::route_multi`]; pair orders are tried until one routes
/// every pair. The switch states implied by the routes are then replayed
/// through the fabric to confirm they produce the candidate.
pub fn enumerate_fabric_permutations(fabric: &SwitchFabric) -> Result<FabricEnumeration, RoutingError> {
    let n = fabric.inputs.len();
    let graph: Arc<MeshGraph> = Arc::new(fabric.graph.clone());
    let mut out = FabricEnumeration::default();
    for perm in (0..n).permutations(n) {
        let pairs: Vec<(NodeId, NodeId)> = (0..n).map(|i| (fabric.inputs[i], fabric.outputs[perm[i]])).collect();
        let mut found = None;
        for order in (0..n).permutations(n).take(MAX_ORDERS) {
            let ordered: Vec<_> = order.iter().map(|&k| pairs[k]).collect();
            let mut session = RoutingSession::new(graph.clone());
            let res = session.route_multi(&ordered)?;
            out.route_multi_calls += 1;
            if res.routed() < n {
                continue;
            }
            let paths: Vec<Path> = res.paths().cloned().collect();
            if let Some(states) = joint_states(&paths) {
                if fabric.propagate(&states) == perm {
                    found = Some(paths);
                    break;
                }
            }
        }
        match found {
            Some(paths) => {
                out.permutations.insert(perm, paths);
            }
            None => out.failed.push(perm),
        }
    }
    Ok(out)
}
