use super::prepare;
use crate::error::SearchError;
use crate::mesh::{is_physical, MeshGraph, NodeId, Path, PruneRule, NO_UNIT};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BidirOutcome {
    Found(Path),
    /// The two searches met, but the joined path is not realisable.
    NonphysicalIntersection {
        node: NodeId,
        path: Path,
    },
    NotFound,
}

impl BidirOutcome {
    pub fn path(&self) -> Option<&Path> {
        match self {
            BidirOutcome::Found(p) => Some(p),
            _ => None,
        }
    }
}

const NONE: u32 = u32::MAX;

struct Side {
    seen: Vec<bool>,
    pred: Vec<u32>,
    weight: Vec<i64>,
    frontier: Vec<u32>,
}

impl Side {
    fn new(n: usize, start: u32) -> Self {
        let mut s = Side {
            seen: vec![false; n],
            pred: vec![NONE; n],
            weight: vec![0; n],
            frontier: vec![start],
        };
        s.seen[start as usize] = true;
        s
    }

    /// Tree path from the side's start to `n`.
    fn chain(&self, mut n: u32) -> Vec<u32> {
        let mut v = vec![n];
        while self.pred[n as usize] != NONE {
            n = self.pred[n as usize];
            v.push(n);
        }
        v.reverse();
        v
    }

    /// Expands the whole frontier by one layer and returns the new nodes.
    fn step(&mut self, g: &MeshGraph, blocked: &[bool], expanded: &mut u64) -> Vec<u32> {
        let s = g.scheme();
        let mut next = Vec::new();
        for &u in &std::mem::take(&mut self.frontier) {
            *expanded += 1;
            for &(n, ew) in g.adj_at(u) {
                if self.seen[n as usize] || blocked[n as usize] {
                    continue;
                }
                let w = self.weight[u as usize] + ew;
                let ok = match g.prune_rule() {
                    PruneRule::Threshold => w < s.threshold,
                    PruneRule::Structural => {
                        let k = g.slot_at(n);
                        let p = self.pred[u as usize];
                        !(k != NO_UNIT && g.slot_at(u) == k && p != NONE && g.slot_at(p) == k)
                    }
                };
                if !ok {
                    continue;
                }
                self.seen[n as usize] = true;
                self.pred[n as usize] = u;
                self.weight[n as usize] = w;
                next.push(n);
            }
        }
        self.frontier = next.clone();
        next
    }
}

/// Alternating layer-by-layer searches from both ends.
///
/// Each side only grows through prefixes below the threshold, but the two
/// halves are never checked against each other, so the joined path can
/// still pass through three primaries of one unit. The join is validated
/// and reported as [`BidirOutcome::NonphysicalIntersection`] when that
/// happens.
pub fn bidirectional_shortest(
    g: &MeshGraph,
    source: NodeId,
    target: NodeId,
    initial_visited: &BTreeSet<NodeId>,
) -> Result<BidirOutcome, SearchError> {
    let p = prepare(g, source, target, initial_visited)?;
    let n = g.node_count();
    let mut fwd = Side::new(n, p.source);
    let mut bwd = Side::new(n, p.target);
    let mut expanded = 0;
    let mut forward = true;
    loop {
        let (grown, other) = if forward { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let fresh = grown.step(g, &p.mask, &mut expanded);
        if fresh.is_empty() {
            return Ok(BidirOutcome::NotFound);
        }
        let meet = fresh
            .iter()
            .copied()
            .filter(|&m| other.seen[m as usize])
            .min_by_key(|&m| (fwd.weight[m as usize] + bwd.weight[m as usize], g.id_at(m)));
        if let Some(m) = meet {
            let mut idx = fwd.chain(m);
            let mut back = bwd.chain(m);
            back.pop();
            idx.extend(back.into_iter().rev());
            let nodes: Vec<NodeId> = idx.iter().map(|&i| g.id_at(i)).collect();
            let w = fwd.weight[m as usize] + bwd.weight[m as usize];
            let path = Path::with_weight(nodes, w);
            return Ok(if is_physical(&path.nodes) {
                BidirOutcome::Found(path)
            } else {
                BidirOutcome::NonphysicalIntersection { node: g.id_at(m), path }
            });
        }
        forward = !forward;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{make_unit, node, Circle, Point};

    #[test]
    fn single_unit() {
        let g = MeshGraph::from_unit(make_unit(0, 0, Circle::Inner, Point::ORIGIN, 0.0));
        let r = bidirectional_shortest(&g, node("ie00"), node("ig00"), &BTreeSet::new()).unwrap();
        assert_eq!(r.path().unwrap().compact(), "ie00-ia00-ic00-ig00");
    }

    #[test]
    fn parallel_ports_meet_badly() {
        let g = MeshGraph::from_unit(make_unit(0, 0, Circle::Inner, Point::ORIGIN, 0.0));
        let r = bidirectional_shortest(&g, node("ie00"), node("if00"), &BTreeSet::new()).unwrap();
        match r {
            BidirOutcome::NonphysicalIntersection { node: m, path } => {
                assert!(m.is_primary());
                assert!(!path.is_physical());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn blocked_is_not_found() {
        let g = MeshGraph::from_unit(make_unit(0, 0, Circle::Inner, Point::ORIGIN, 0.0));
        let v: BTreeSet<_> = [node("ia00"), node("ib00")].into();
        let r = bidirectional_shortest(&g, node("ie00"), node("ig00"), &v).unwrap();
        assert_eq!(r, BidirOutcome::NotFound);
    }
}
