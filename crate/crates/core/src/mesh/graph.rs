use super::ids::{Letter, NodeId, UnitId};
use super::unit::{MziUnit, Point};
use super::weights::WeightScheme;
use crate::error::MeshError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// How searches reject nonphysical prefixes on this graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PruneRule {
    /// Running weight must stay below the scheme threshold.
    #[default]
    Threshold,
    /// Forbid three consecutive primaries of one unit. Used when edge
    /// weights have been inflated and the threshold no longer separates
    /// physical from nonphysical prefixes.
    Structural,
}

pub(crate) const NO_UNIT: u32 = u32::MAX;

/// Undirected weighted graph of a mesh.
///
/// Nodes are stored in `NodeId` order, so index order and name order agree
/// and neighbour lists sorted by index are sorted by name.
#[derive(Clone, Debug)]
pub struct MeshGraph {
    scheme: WeightScheme,
    ids: Vec<NodeId>,
    index: HashMap<NodeId, u32>,
    adj: Vec<Vec<(u32, i64)>>,
    positions: Vec<Point>,
    owners: Vec<Vec<UnitId>>,
    units: BTreeMap<UnitId, MziUnit>,
    aliases: BTreeMap<NodeId, NodeId>,
    prune: PruneRule,
    unit_slot: Vec<u32>,
    entry_bound: Vec<i64>,
    edge_count: usize,
}

/// Collects nodes, edges and units, then freezes them into a [`MeshGraph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    scheme: WeightScheme,
    nodes: BTreeMap<NodeId, Point>,
    edges: BTreeMap<(NodeId, NodeId), i64>,
    units: BTreeMap<UnitId, MziUnit>,
    aliases: BTreeMap<NodeId, NodeId>,
    prune: PruneRule,
}

impl GraphBuilder {
    pub fn new(scheme: WeightScheme) -> Self {
        GraphBuilder {
            scheme,
            ..Default::default()
        }
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn prune_rule(&mut self, rule: PruneRule) -> &mut Self {
        self.prune = rule;
        self
    }

    pub fn add_node(&mut self, id: NodeId, pos: Point) -> &mut Self {
        self.nodes.entry(id).or_insert(pos);
        self
    }

    /// Adds or overwrites an undirected edge.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, w: i64) -> &mut Self {
        self.edges.insert(ordered(u, v), w);
        self
    }

    /// Registers a unit and its eight edges. Missing nodes are created at
    /// the unit's geometric positions.
    pub fn add_unit(&mut self, unit: MziUnit) -> Result<&mut Self, MeshError> {
        if self.units.contains_key(&unit.id) {
            return Err(MeshError::DuplicateUnit(unit.id));
        }
        for l in Letter::ALL {
            let pos = unit.node_position(l);
            self.nodes.entry(unit.node(l)).or_insert(pos);
        }
        for (x, y) in MziUnit::edge_letters() {
            let w = if x.is_dummy() || y.is_dummy() {
                self.scheme.w_dummy
            } else {
                self.scheme.w_internal
            };
            self.add_edge(unit.node(x), unit.node(y), w);
        }
        self.units.insert(unit.id, unit);
        Ok(self)
    }

    pub fn alias(&mut self, from: NodeId, to: NodeId) -> &mut Self {
        if from != to {
            self.aliases.insert(from, to);
        }
        self
    }

    pub fn build(self) -> Result<MeshGraph, MeshError> {
        MeshGraph::from_parts(
            self.scheme,
            self.nodes,
            self.edges,
            self.units,
            self.aliases,
            self.prune,
        )
    }
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl MeshGraph {
    pub fn from_parts(
        scheme: WeightScheme,
        nodes: BTreeMap<NodeId, Point>,
        edges: BTreeMap<(NodeId, NodeId), i64>,
        units: BTreeMap<UnitId, MziUnit>,
        aliases: BTreeMap<NodeId, NodeId>,
        prune: PruneRule,
    ) -> Result<MeshGraph, MeshError> {
        let ids: Vec<NodeId> = nodes.keys().copied().collect();
        let positions: Vec<Point> = nodes.values().copied().collect();
        let index: HashMap<NodeId, u32> = ids.iter().enumerate().map(|(i, n)| (*n, i as u32)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (&(u, v), &w) in &edges {
            if u == v {
                return Err(MeshError::Format(format!("self loop at {u}")));
            }
            let iu = *index.get(&u).ok_or(MeshError::UnknownNode(u))?;
            let iv = *index.get(&v).ok_or(MeshError::UnknownNode(v))?;
            adj[iu as usize].push((iv, w));
            adj[iv as usize].push((iu, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let mut owners = vec![Vec::new(); ids.len()];
        for unit in units.values() {
            let mut seen = BTreeSet::new();
            for n in unit.nodes {
                let i = *index.get(&n).ok_or(MeshError::UnknownNode(n))?;
                if seen.insert(i) {
                    owners[i as usize].push(unit.id);
                }
            }
        }
        for o in &mut owners {
            o.sort_unstable();
        }

        let slots: BTreeMap<UnitId, u32> = units.keys().enumerate().map(|(i, u)| (*u, i as u32)).collect();
        let unit_slot = ids
            .iter()
            .map(|n| {
                if n.is_primary() {
                    slots.get(&n.unit_id()).copied().unwrap_or(NO_UNIT)
                } else {
                    NO_UNIT
                }
            })
            .collect();

        let mut resolved = BTreeMap::new();
        for (&from, &to) in &aliases {
            let mut target = to;
            let mut hops = 0;
            while let Some(&next) = aliases.get(&target) {
                target = next;
                hops += 1;
                if hops > aliases.len() {
                    return Err(MeshError::Format(format!("alias cycle at {from}")));
                }
            }
            if index.contains_key(&target) && !index.contains_key(&from) {
                resolved.insert(from, target);
            }
        }

        let entry_bound = (0..ids.len())
            .map(|i| {
                if !ids[i].is_primary() {
                    return 0;
                }
                adj[i]
                    .iter()
                    .filter(|(j, _)| ids[*j as usize].is_primary())
                    .map(|(_, w)| *w)
                    .min()
                    .map_or(0, |w| w + scheme.w_dummy)
            })
            .collect();

        Ok(MeshGraph {
            scheme,
            entry_bound,
            edge_count: edges.len(),
            ids,
            index,
            adj,
            positions,
            owners,
            units,
            aliases: resolved,
            prune,
            unit_slot,
        })
    }

    /// Graph of a single unit.
    pub fn from_unit(unit: MziUnit) -> MeshGraph {
        let mut b = GraphBuilder::new(WeightScheme::derive());
        b.add_unit(unit).expect("fresh builder");
        b.build().expect("single unit is well formed")
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn prune_rule(&self) -> PruneRule {
        self.prune
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    /// Nodes in canonical order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    /// Dummy nodes in canonical order.
    pub fn ports(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids.iter().copied().filter(|n| n.is_dummy())
    }

    /// Dummy nodes that belong to exactly one unit, i.e. the mesh boundary.
    pub fn boundary_ports(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids
            .iter()
            .enumerate()
            .filter(|(i, n)| n.is_dummy() && self.owners[*i].len() == 1)
            .map(|(_, n)| *n)
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.index.contains_key(&n)
    }

    /// Maps a name to the node that carries it, following merge aliases.
    pub fn resolve(&self, n: NodeId) -> Option<NodeId> {
        if self.contains(n) {
            Some(n)
        } else {
            self.aliases.get(&n).copied()
        }
    }

    pub fn resolve_or_err(&self, n: NodeId) -> Result<NodeId, MeshError> {
        self.resolve(n).ok_or(MeshError::UnknownNode(n))
    }

    pub fn aliases(&self) -> &BTreeMap<NodeId, NodeId> {
        &self.aliases
    }

    pub fn position(&self, n: NodeId) -> Option<Point> {
        self.index.get(&n).map(|&i| self.positions[i as usize])
    }

    pub fn owners(&self, n: NodeId) -> &[UnitId] {
        self.index
            .get(&n)
            .map(|&i| self.owners[i as usize].as_slice())
            .unwrap_or(&[])
    }

    pub fn units(&self) -> impl Iterator<Item = &MziUnit> {
        self.units.values()
    }

    pub fn unit(&self, id: UnitId) -> Option<&MziUnit> {
        self.units.get(&id)
    }

    pub fn unit_or_err(&self, id: UnitId) -> Result<&MziUnit, MeshError> {
        self.units.get(&id).ok_or(MeshError::UnknownUnit(id))
    }

    /// Neighbours with edge weights, in canonical order.
    pub fn neighbors(&self, n: NodeId) -> impl Iterator<Item = (NodeId, i64)> + '_ {
        let list = self
            .index
            .get(&n)
            .map(|&i| self.adj[i as usize].as_slice())
            .unwrap_or(&[]);
        list.iter().map(|&(j, w)| (self.ids[j as usize], w))
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.index.get(&n).map(|&i| self.adj[i as usize].len()).unwrap_or(0)
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<i64> {
        let iu = *self.index.get(&u)?;
        let iv = *self.index.get(&v)?;
        self.edge_weight(iu, iv)
    }

    /// Edges with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, i64)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |(j, _)| (*j as usize) > i)
                .map(move |&(j, w)| (self.ids[i], self.ids[j as usize], w))
        })
    }

    // index-level access for the search code

    pub(crate) fn idx(&self, n: NodeId) -> Option<u32> {
        self.index.get(&n).copied()
    }

    pub(crate) fn id_at(&self, i: u32) -> NodeId {
        self.ids[i as usize]
    }

    pub(crate) fn adj_at(&self, i: u32) -> &[(u32, i64)] {
        &self.adj[i as usize]
    }

    pub(crate) fn is_primary_at(&self, i: u32) -> bool {
        self.ids[i as usize].is_primary()
    }

    /// Registry slot of the unit a primary belongs to, or `NO_UNIT`.
    /// Least weight a path still owes after entering primary `i`.
    pub(crate) fn entry_bound_at(&self, i: u32) -> i64 {
        self.entry_bound[i as usize]
    }

    pub(crate) fn slot_at(&self, i: u32) -> u32 {
        self.unit_slot[i as usize]
    }

    pub(crate) fn edge_weight(&self, iu: u32, iv: u32) -> Option<i64> {
        let list = &self.adj[iu as usize];
        list.binary_search_by_key(&iv, |&(j, _)| j).ok().map(|k| list[k].1)
    }

    /// Node indices of a set of names, silently skipping unknown ones.
    pub(crate) fn mask_of<'a>(&self, nodes: impl IntoIterator<Item = &'a NodeId>) -> Vec<bool> {
        let mut m = vec![false; self.ids.len()];
        for n in nodes {
            if let Some(i) = self.resolve(*n).and_then(|r| self.idx(r)) {
                m[i as usize] = true;
            }
        }
        m
    }

    /// Copy of the graph where the unit's internal edges carry `penalty` extra
    /// weight. Searches on the copy use structural pruning.
    pub fn with_inflated_unit(&self, unit: UnitId, penalty: i64) -> Result<MeshGraph, MeshError> {
        let u = self.unit_or_err(unit)?.clone();
        let mut g = self.clone();
        let prim: Vec<u32> = u.primaries().iter().filter_map(|n| self.idx(*n)).collect();
        for &p in &prim {
            for e in &mut g.adj[p as usize] {
                if prim.contains(&e.0) {
                    e.1 += penalty;
                }
            }
        }
        g.prune = PruneRule::Structural;
        Ok(g)
    }

    /// Copy of the graph without the unit: its primaries and any port it does
    /// not share are deleted.
    pub fn without_unit(&self, unit: UnitId) -> Result<MeshGraph, MeshError> {
        let u = self.unit_or_err(unit)?;
        let doomed: BTreeSet<NodeId> = u
            .nodes
            .iter()
            .copied()
            .filter(|n| n.is_primary() || self.owners(*n).len() <= 1)
            .collect();
        let nodes = self
            .ids
            .iter()
            .zip(&self.positions)
            .filter(|(n, _)| !doomed.contains(n))
            .map(|(n, p)| (*n, *p))
            .collect();
        let edges = self
            .edges()
            .filter(|(a, b, _)| !doomed.contains(a) && !doomed.contains(b))
            .map(|(a, b, w)| ((a, b), w))
            .collect();
        let mut units = self.units.clone();
        units.remove(&unit);
        let aliases = self
            .aliases
            .iter()
            .filter(|(_, to)| !doomed.contains(to))
            .map(|(a, b)| (*a, *b))
            .collect();
        MeshGraph::from_parts(self.scheme, nodes, edges, units, aliases, self.prune)
    }
}
