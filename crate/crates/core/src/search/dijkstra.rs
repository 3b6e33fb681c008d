use super::prepare;
use crate::error::SearchError;
use crate::mesh::{is_physical, MeshGraph, NodeId, Path, PruneRule};
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

// Each node is split by how the path arrived: at a primary from its port,
// at a primary across the coupler, or at a port from a given neighbour. Only
// the moves port -> primary -> primary -> port are allowed, and a port never
// sends light back the way it came, which rules out a third primary of the
// same unit and immediate reflections without looking at the path.
const ENTERED: usize = 0;
const CROSSED: usize = 1;
/// Port states start here: `AT_PORT + j` arrived from the port's `j`-th
/// neighbour, `AT_PORT + degree` is the source.
const AT_PORT: usize = 2;

/// Priority-queue shortest path, kept for comparison with the DFS searches.
///
/// Dummy edges are negative, so the search runs on reduced costs
/// `w + h(v) - h(u)` with `h` the cheapest completion from each phase; these
/// are non-negative for every mesh the builders produce. The result is
/// checked with [`is_physical`] before it is returned.
pub fn dijkstra_baseline(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    initial_visited: &BTreeSet<NodeId>,
) -> Result<Option<Path>, SearchError> {
    let p = prepare(g, source, target, initial_visited)?;
    let s = g.scheme();
    let n = g.node_count();
    let width = AT_PORT + 1 + (0..n as u32).map(|i| g.adj_at(i).len()).max().unwrap_or(0);
    let h = |phase: usize| match phase {
        ENTERED => s.w_internal + s.w_dummy,
        CROSSED => s.w_dummy,
        _ => 0,
    };
    let mut dist = vec![i64::MAX; width * n];
    let mut pred = vec![usize::MAX; width * n];
    let start = width * p.source as usize + AT_PORT + g.adj_at(p.source).len();
    dist[start] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0i64, start)));
    let mut goal = None;
    while let Some(Reverse((d, st))) = heap.pop() {
        if d > dist[st] {
            continue;
        }
        let (u, phase) = ((st / width) as u32, st % width);
        if u == p.target {
            goal = Some(st);
            break;
        }
        // true weight of the best prefix ending in this state
        let actual = d - h(phase);
        let came_from = phase.checked_sub(AT_PORT).and_then(|j| g.adj_at(u).get(j)).map(|e| e.0);
        for &(v, w) in g.adj_at(u) {
            if p.mask[v as usize] || Some(v) == came_from {
                continue;
            }
            let next = match (phase, g.is_primary_at(v)) {
                (ENTERED, true) => CROSSED,
                (ENTERED, false) | (CROSSED, true) => continue,
                (CROSSED, false) => AT_PORT,
                (_, true) => ENTERED,
                (_, false) => AT_PORT,
            };
            let next = if next == AT_PORT {
                AT_PORT + g.adj_at(v).iter().position(|e| e.0 == u).expect("symmetric adjacency")
            } else {
                next
            };
            if g.prune_rule() == PruneRule::Threshold && actual + w >= s.threshold {
                continue;
            }
            let cost = w + h(next) - h(phase);
            debug_assert!(cost >= 0, "negative reduced cost");
            let vs = width * v as usize + next;
            let nd = d + cost;
            if nd < dist[vs] {
                dist[vs] = nd;
                pred[vs] = st;
                heap.push(Reverse((nd, vs)));
            }
        }
    }
    let Some(goal) = goal else {
        return Ok(None);
    };
    let mut idx = vec![goal];
    while let Some(&last) = idx.last() {
        if pred[last] == usize::MAX {
            break;
        }
        idx.push(pred[last]);
    }
    idx.reverse();
    let nodes: Vec<NodeId> = idx.iter().map(|&st| g.id_at((st / width) as u32)).collect();
    if !is_physical(&nodes) {
        return Ok(None);
    }
    Ok(Some(Path::new(g, nodes).expect("walk follows graph edges")))
}
