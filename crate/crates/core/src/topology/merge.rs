//! Turns a bag of positioned units into one graph, fusing coincident nodes.

use crate::error::MeshError;
use crate::mesh::{GraphBuilder, Letter, MeshGraph, MziUnit, NodeId, Point, UnitId, WeightScheme};
use std::collections::{BTreeMap, BTreeSet, HashMap};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Units plus the merges to apply between their nodes.
pub(crate) struct Assembly {
    pub scheme: WeightScheme,
    pub units: Vec<MziUnit>,
    /// Fuse nodes closer than this. `None` disables spatial merging.
    pub tolerance: Option<f64>,
    /// Explicit merges by original name.
    pub links: Vec<(NodeId, NodeId)>,
}

impl Assembly {
    pub fn new(scheme: WeightScheme) -> Self {
        Assembly {
            scheme,
            units: Vec::new(),
            tolerance: None,
            links: Vec::new(),
        }
    }

    pub fn build(self) -> Result<MeshGraph, MeshError> {
        let mut seen = BTreeSet::new();
        for u in &self.units {
            if !seen.insert(u.id) {
                return Err(MeshError::DuplicateUnit(u.id));
            }
        }

        let mut raw: Vec<(NodeId, Point)> = Vec::with_capacity(self.units.len() * 8);
        for u in &self.units {
            for l in Letter::ALL {
                raw.push((u.node(l), u.node_position(l)));
            }
        }
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let slot: HashMap<NodeId, usize> = raw.iter().enumerate().map(|(i, r)| (r.0, i)).collect();

        let mut uf = UnionFind::new(raw.len());
        if let Some(tol) = self.tolerance {
            spatial_union(&raw, tol, &mut uf);
        }
        for (a, b) in &self.links {
            let ia = *slot.get(a).ok_or(MeshError::UnknownNode(*a))?;
            let ib = *slot.get(b).ok_or(MeshError::UnknownNode(*b))?;
            uf.union(ia, ib);
        }

        // union keeps the smallest index as root, and raw is sorted by name,
        // so the root is the lowest (cell, unit) name of its group
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..raw.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }

        for members in groups.values() {
            check_group(&raw, members)?;
        }

        let root_of = |i: usize, uf: &mut UnionFind| raw[uf.find(i)].0;
        let mut kept = Vec::new();
        for u in &self.units {
            let survives: Vec<bool> = u.primaries().iter().map(|n| root_of(slot[n], &mut uf) == *n).collect();
            if survives.iter().all(|s| *s) {
                let mut k = u.clone();
                for (l, n) in k.nodes.iter_mut().enumerate() {
                    *n = root_of(slot[&u.id.node(Letter::ALL[l])], &mut uf);
                }
                kept.push(k);
            } else if survives.iter().any(|s| *s) {
                return Err(MeshError::Collision(u.primaries().to_vec()));
            }
        }

        let mut port_owners: BTreeMap<NodeId, BTreeSet<UnitId>> = BTreeMap::new();
        for k in &kept {
            for n in k.ports() {
                port_owners.entry(n).or_default().insert(k.id);
            }
        }
        if let Some((n, _)) = port_owners.iter().find(|(_, o)| o.len() > 2) {
            let members: Vec<NodeId> = groups[&slot[n]].iter().map(|&i| raw[i].0).collect();
            return Err(MeshError::Collision(members));
        }

        let mut b = GraphBuilder::new(self.scheme);
        for (root, members) in &groups {
            b.add_node(raw[*root].0, raw[*root].1);
            for &m in &members[1..] {
                b.alias(raw[m].0, raw[*root].0);
            }
        }
        for k in kept {
            b.add_unit(k)?;
        }
        b.build()
    }
}

fn spatial_union(raw: &[(NodeId, Point)], tol: f64, uf: &mut UnionFind) {
    let cell = tol.max(f64::MIN_POSITIVE) * 2.0;
    let key = |p: Point| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, (_, p)) in raw.iter().enumerate() {
        let (kx, ky) = key(*p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = grid.get(&(kx + dx, ky + dy)) {
                    for &j in list {
                        if raw[j].1.dist(*p) <= tol {
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
        grid.entry((kx, ky)).or_default().push(i);
    }
}

/// A fused group may hold whole-unit duplicates from different cells, or
/// ports of at most two units of any one cell.
fn check_group(raw: &[(NodeId, Point)], members: &[usize]) -> Result<(), MeshError> {
    if members.len() < 2 {
        return Ok(());
    }
    let ids: Vec<NodeId> = members.iter().map(|&i| raw[i].0).collect();
    let collision = || Err(MeshError::Collision(ids.clone()));
    let primaries = ids.iter().filter(|n| n.is_primary()).count();
    if primaries != 0 && primaries != ids.len() {
        return collision();
    }
    let mut per_cell: BTreeMap<u32, usize> = BTreeMap::new();
    let mut units = BTreeSet::new();
    for n in &ids {
        *per_cell.entry(n.cell).or_default() += 1;
        if !units.insert(n.unit_id()) {
            return collision();
        }
    }
    let limit = if primaries > 0 { 1 } else { 2 };
    if per_cell.values().any(|&c| c > limit) {
        return collision();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{make_unit, node, Circle};

    #[test]
    fn coincident_units_in_one_cell_collide() {
        let mut a = Assembly::new(WeightScheme::derive());
        a.tolerance = Some(1e-6);
        a.units.push(make_unit(0, 0, Circle::Inner, Point::ORIGIN, 0.0));
        a.units.push(make_unit(1, 0, Circle::Inner, Point::ORIGIN, 0.0));
        assert!(matches!(a.build(), Err(MeshError::Collision(_))));
    }

    #[test]
    fn duplicate_from_other_cell_is_aliased() {
        let mut a = Assembly::new(WeightScheme::derive());
        a.tolerance = Some(1e-6);
        a.units.push(make_unit(0, 0, Circle::Inner, Point::ORIGIN, 0.0));
        a.units.push(make_unit(4, 1, Circle::Outer, Point::ORIGIN, 180.0));
        let g = a.build().unwrap();
        assert_eq!(g.unit_count(), 1);
        assert_eq!(g.node_count(), 8);
        // rotated half a turn: a lands on d
        assert_eq!(g.resolve(node("oa41")), Some(node("id00")));
        assert_eq!(g.resolve(node("og41")), Some(node("if00")));
    }

    #[test]
    fn explicit_links() {
        let mut a = Assembly::new(WeightScheme::derive());
        a.units.push(make_unit(0, 0, Circle::Switch, Point::ORIGIN, 0.0));
        a.units.push(make_unit(0, 1, Circle::Switch, Point::new(1.0, 0.0), 0.0));
        a.links.push((node("sg00"), node("se01")));
        let g = a.build().unwrap();
        assert_eq!(g.node_count(), 15);
        assert_eq!(g.owners(node("sg00")).len(), 2);
        assert_eq!(g.resolve(node("se01")), Some(node("sg00")));
    }
}
