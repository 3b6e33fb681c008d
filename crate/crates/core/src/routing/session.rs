use crate::error::{MeshError, RoutingError, SearchError};
use crate::export::fingerprint;
use crate::mesh::{MeshGraph, NodeId, Path, UnitId};
use crate::search::dfs_shortest_path;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

/// How a malfunctioning unit is kept out of later routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultStrategy {
    /// Add `penalty` to the unit's internal edges. Routes may still use it.
    InflateWeights { penalty: i64 },
    /// Drop the unit's primaries and unshared ports from the graph view.
    RemoveUnit,
    /// Mark all eight nodes of the unit as unusable for this session.
    Blacklist,
}

impl FromStr for FaultStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "blacklist" => Ok(FaultStrategy::Blacklist),
            "remove" => Ok(FaultStrategy::RemoveUnit),
            _ => match s.strip_prefix("inflate:") {
                Some(p) => match p.parse() {
                    Ok(penalty) if penalty >= 1 => Ok(FaultStrategy::InflateWeights { penalty }),
                    _ => Err(format!("invalid penalty '{p}' (expected an integer of at least 1)")),
                },
                None => Err(format!(
                    "unknown fault strategy '{s}' (expected blacklist, remove or inflate:P)"
                )),
            },
        }
    }
}

impl fmt::Display for FaultStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultStrategy::InflateWeights { penalty } => write!(f, "inflate:{penalty}"),
            FaultStrategy::RemoveUnit => f.write_str("remove"),
            FaultStrategy::Blacklist => f.write_str("blacklist"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultRecord {
    pub unit: UnitId,
    pub strategy: FaultStrategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unroutable {
    EndpointEngaged(NodeId),
    EndpointBlacklisted(NodeId),
    /// The endpoint belonged to a unit removed by a fault.
    EndpointRemoved(NodeId),
    NoPhysicalPath,
}

impl fmt::Display for Unroutable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unroutable::EndpointEngaged(n) => write!(f, "endpoint {n} is engaged by an earlier path"),
            Unroutable::EndpointBlacklisted(n) => write!(f, "endpoint {n} is blacklisted"),
            Unroutable::EndpointRemoved(n) => write!(f, "endpoint {n} was removed by a fault"),
            Unroutable::NoPhysicalPath => f.write_str("no physical path"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteOutcome {
    Routed { id: u64, path: Path },
    Unroutable(Unroutable),
}

impl RouteOutcome {
    pub fn path(&self) -> Option<&Path> {
        match self {
            RouteOutcome::Routed { path, .. } => Some(path),
            RouteOutcome::Unroutable(_) => None,
        }
    }

    pub fn is_routed(&self) -> bool {
        matches!(self, RouteOutcome::Routed { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRoute {
    pub source: NodeId,
    pub target: NodeId,
    pub outcome: RouteOutcome,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiRouteResult {
    pub outcomes: Vec<PairRoute>,
    pub order_used: Vec<(NodeId, NodeId)>,
    pub elapsed: Duration,
}

impl MultiRouteResult {
    pub fn routed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.outcome.is_routed()).count()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.outcomes.iter().filter_map(|o| o.outcome.path())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub id: u64,
    pub nodes: Vec<NodeId>,
}

/// Everything needed to rebuild a session on top of its base graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSnapshot {
    pub fingerprint: String,
    pub faults: Vec<FaultRecord>,
    pub allocations: Vec<Allocation>,
    pub engaged: Vec<NodeId>,
    pub blacklisted: Vec<NodeId>,
    pub next_id: u64,
}

/// Engagement state for routing several pairs through one mesh.
///
/// The base graph is never modified. Weight and removal faults produce a
/// derived view that all later searches run on.
#[derive(Clone, Debug)]
pub struct RoutingSession {
    base: Arc<MeshGraph>,
    view: Arc<MeshGraph>,
    engaged: BTreeSet<NodeId>,
    blacklisted: BTreeSet<NodeId>,
    allocated: BTreeMap<u64, Path>,
    fault_log: Vec<FaultRecord>,
    next_id: u64,
    view_fp: OnceLock<String>,
}

impl RoutingSession {
    pub fn new(graph: impl Into<Arc<MeshGraph>>) -> Self {
        let base = graph.into();
        RoutingSession {
            view: base.clone(),
            base,
            engaged: BTreeSet::new(),
            blacklisted: BTreeSet::new(),
            allocated: BTreeMap::new(),
            fault_log: Vec::new(),
            next_id: 1,
            view_fp: OnceLock::new(),
        }
    }

    /// The graph searches run on, with faults applied.
    pub fn graph(&self) -> &MeshGraph {
        &self.view
    }

    pub fn base(&self) -> &MeshGraph {
        &self.base
    }

    pub fn engaged(&self) -> &BTreeSet<NodeId> {
        &self.engaged
    }

    pub fn blacklisted(&self) -> &BTreeSet<NodeId> {
        &self.blacklisted
    }

    pub fn allocated(&self) -> &BTreeMap<u64, Path> {
        &self.allocated
    }

    pub fn fault_log(&self) -> &[FaultRecord] {
        &self.fault_log
    }

    /// Nodes no new path may touch.
    pub fn excluded(&self) -> BTreeSet<NodeId> {
        self.engaged.union(&self.blacklisted).copied().collect()
    }

    pub(crate) fn view_fingerprint(&self) -> &str {
        self.view_fp.get_or_init(|| fingerprint(&self.view))
    }

    /// Resolves an endpoint, or says why it cannot be used right now.
    pub(crate) fn endpoint(&self, n: NodeId) -> Result<Result<NodeId, Unroutable>, RoutingError> {
        let r = self.base.resolve(n).ok_or(MeshError::UnknownNode(n))?;
        if !r.is_dummy() {
            return Err(RoutingError::NotAPort(n));
        }
        Ok(if self.view.resolve(r).is_none() {
            Err(Unroutable::EndpointRemoved(r))
        } else if self.blacklisted.contains(&r) {
            Err(Unroutable::EndpointBlacklisted(r))
        } else if self.engaged.contains(&r) {
            Err(Unroutable::EndpointEngaged(r))
        } else {
            Ok(r)
        })
    }

    fn check_pair(&self, s: NodeId, t: NodeId) -> Result<(), RoutingError> {
        let _ = self.endpoint(s)?;
        let _ = self.endpoint(t)?;
        if self.base.resolve(s) == self.base.resolve(t) {
            return Err(SearchError::SourceIsTarget(s).into());
        }
        Ok(())
    }

    /// Shortest physical path avoiding engaged and blacklisted nodes. The
    /// path is engaged on success.
    pub fn route(&mut self, source: NodeId, target: NodeId) -> Result<RouteOutcome, RoutingError> {
        self.check_pair(source, target)?;
        self.route_checked(source, target)
    }

    fn route_checked(&mut self, source: NodeId, target: NodeId) -> Result<RouteOutcome, RoutingError> {
        let s = match self.endpoint(source)? {
            Ok(s) => s,
            Err(why) => return Ok(RouteOutcome::Unroutable(why)),
        };
        let t = match self.endpoint(target)? {
            Ok(t) => t,
            Err(why) => return Ok(RouteOutcome::Unroutable(why)),
        };
        let found = if self.blacklisted.is_empty() {
            dfs_shortest_path(&self.view, s, t, &self.engaged)?
        } else {
            dfs_shortest_path(&self.view, s, t, &self.excluded())?
        };
        match found {
            Some(path) => {
                let id = self.commit(path.clone());
                Ok(RouteOutcome::Routed { id, path })
            }
            None => Ok(RouteOutcome::Unroutable(Unroutable::NoPhysicalPath)),
        }
    }

    /// Routes the pairs one after another in the given order. Each search
    /// avoids everything engaged by the pairs before it.
    pub fn route_multi(&mut self, pairs: &[(NodeId, NodeId)]) -> Result<MultiRouteResult, RoutingError> {
        for &(s, t) in pairs {
            self.check_pair(s, t)?;
        }
        let t0 = Instant::now();
        let mut outcomes = Vec::with_capacity(pairs.len());
        for &(source, target) in pairs {
            let outcome = self.route_checked(source, target)?;
            outcomes.push(PairRoute {
                source,
                target,
                outcome,
            });
        }
        Ok(MultiRouteResult {
            outcomes,
            order_used: pairs.to_vec(),
            elapsed: t0.elapsed(),
        })
    }

    pub(crate) fn commit(&mut self, path: Path) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.engaged.extend(path.nodes.iter().copied());
        self.allocated.insert(id, path);
        id
    }

    /// Engages an externally chosen path.
    pub fn engage_path(&mut self, path: &Path) -> Result<u64, RoutingError> {
        let nodes = path
            .nodes
            .iter()
            .map(|&n| self.view.resolve_or_err(n))
            .collect::<Result<Vec<_>, _>>()?;
        let excluded = self.excluded();
        let mut clash: Vec<NodeId> = nodes.iter().copied().filter(|n| excluded.contains(n)).collect();
        clash.sort();
        clash.dedup();
        if !clash.is_empty() {
            return Err(RoutingError::Overlap(clash));
        }
        let path = Path::new(&self.view, nodes)?;
        Ok(self.commit(path))
    }

    pub fn release_path(&mut self, id: u64) -> Result<Path, RoutingError> {
        let path = self.allocated.remove(&id).ok_or(RoutingError::UnknownRequest(id))?;
        for n in &path.nodes {
            self.engaged.remove(n);
        }
        Ok(path)
    }

    pub fn apply_fault(&mut self, unit: UnitId, strategy: FaultStrategy) -> Result<(), RoutingError> {
        let u = self.view.unit_or_err(unit)?;
        match strategy {
            FaultStrategy::InflateWeights { penalty } => {
                if penalty < 1 {
                    return Err(RoutingError::InvalidPenalty);
                }
                self.set_view(self.view.with_inflated_unit(unit, penalty)?);
            }
            FaultStrategy::RemoveUnit => {
                self.set_view(self.view.without_unit(unit)?);
            }
            FaultStrategy::Blacklist => {
                let nodes: Vec<NodeId> = u.nodes.iter().filter_map(|n| self.view.resolve(*n)).collect();
                self.blacklisted.extend(nodes);
            }
        }
        self.fault_log.push(FaultRecord { unit, strategy });
        Ok(())
    }

    fn set_view(&mut self, g: MeshGraph) {
        self.view = Arc::new(g);
        self.view_fp = OnceLock::new();
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot {
            fingerprint: fingerprint(&self.base),
            faults: self.fault_log.clone(),
            allocations: self
                .allocated
                .iter()
                .map(|(&id, p)| Allocation {
                    id,
                    nodes: p.nodes.clone(),
                })
                .collect(),
            engaged: self.engaged.iter().copied().collect(),
            blacklisted: self.blacklisted.iter().copied().collect(),
            next_id: self.next_id,
        }
    }

    /// Replays a snapshot on `base`, which must be the graph it was taken from.
    pub fn restore(base: impl Into<Arc<MeshGraph>>, snap: &SessionSnapshot) -> Result<Self, RoutingError> {
        let mut s = RoutingSession::new(base);
        let actual = fingerprint(&s.base);
        if actual != snap.fingerprint {
            return Err(RoutingError::FingerprintMismatch {
                expected: snap.fingerprint.clone(),
                actual,
            });
        }
        for f in &snap.faults {
            s.apply_fault(f.unit, f.strategy)?;
        }
        for a in &snap.allocations {
            if s.allocated.contains_key(&a.id) || a.id >= snap.next_id {
                return Err(RoutingError::Snapshot(format!("bad allocation id {}", a.id)));
            }
            let path = Path::new(&s.view, a.nodes.clone())?;
            if path
                .nodes
                .iter()
                .any(|n| s.engaged.contains(n) || s.blacklisted.contains(n))
            {
                return Err(RoutingError::Snapshot(format!("allocation {} overlaps another", a.id)));
            }
            s.engaged.extend(path.nodes.iter().copied());
            s.allocated.insert(a.id, path);
        }
        s.next_id = snap.next_id;
        if !s.engaged.iter().eq(snap.engaged.iter()) || !s.blacklisted.iter().eq(snap.blacklisted.iter()) {
            return Err(RoutingError::Snapshot(
                "engaged or blacklisted nodes disagree with the allocations and faults".into(),
            ));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{make_unit, node, Circle, Point};
    use crate::topology::{build_hex_network, NetworkSpec};

    fn single() -> RoutingSession {
        RoutingSession::new(MeshGraph::from_unit(make_unit(0, 0, Circle::Inner, Point::ORIGIN, 0.0)))
    }

    #[test]
    fn engage_blocks_same_request() {
        let mut s = single();
        let r = s.route(node("ie00"), node("ig00")).unwrap();
        assert!(r.is_routed());
        assert_eq!(
            s.route(node("ie00"), node("ig00")).unwrap(),
            RouteOutcome::Unroutable(Unroutable::EndpointEngaged(node("ie00")))
        );
    }

    #[test]
    fn release_restores() {
        let mut s = single();
        let RouteOutcome::Routed { id, path } = s.route(node("ie00"), node("ig00")).unwrap() else {
            panic!("not routed");
        };
        s.release_path(id).unwrap();
        assert!(s.engaged().is_empty());
        assert_eq!(s.route(node("ie00"), node("ig00")).unwrap().path(), Some(&path));
        assert!(matches!(s.release_path(99), Err(RoutingError::UnknownRequest(99))));
    }

    #[test]
    fn overlap_is_reported() {
        let mut s = single();
        let g = s.graph().clone();
        let p = Path::new(&g, ["ie00", "ia00", "ic00", "ig00"].map(node).to_vec()).unwrap();
        s.engage_path(&p).unwrap();
        let q = Path::new(&g, ["if00", "ib00", "ic00", "ig00"].map(node).to_vec()).unwrap();
        match s.engage_path(&q) {
            Err(RoutingError::Overlap(v)) => assert_eq!(v, vec![node("ic00"), node("ig00")]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn primary_endpoint_is_rejected() {
        let mut s = single();
        assert!(matches!(
            s.route(node("ia00"), node("ig00")),
            Err(RoutingError::NotAPort(_))
        ));
    }

    #[test]
    fn fault_strategy_parsing() {
        assert_eq!("blacklist".parse(), Ok(FaultStrategy::Blacklist));
        assert_eq!("remove".parse(), Ok(FaultStrategy::RemoveUnit));
        assert_eq!("inflate:7".parse(), Ok(FaultStrategy::InflateWeights { penalty: 7 }));
        assert!("inflate:x".parse::<FaultStrategy>().is_err());
        assert!("inflate:0".parse::<FaultStrategy>().is_err());
        assert_eq!(FaultStrategy::InflateWeights { penalty: 7 }.to_string(), "inflate:7");
    }

    #[test]
    fn zero_penalty_is_rejected() {
        let mut s = single();
        let u = UnitId::new(Circle::Inner, 0, 0);
        let r = s.apply_fault(u, FaultStrategy::InflateWeights { penalty: 0 });
        assert!(matches!(r, Err(RoutingError::InvalidPenalty)));
        assert!(s.fault_log().is_empty());
    }

    #[test]
    fn snapshot_round_trip() {
        let g = Arc::new(build_hex_network(&NetworkSpec::cells(3)).unwrap());
        let mut s = RoutingSession::new(g.clone());
        s.apply_fault("i.0.1".parse().unwrap(), FaultStrategy::Blacklist)
            .unwrap();
        s.route(node("of30"), node("oe30")).unwrap();
        s.route(node("of11"), node("oe21")).unwrap();
        let snap = s.snapshot();
        let text = serde_json::to_string(&snap).unwrap();
        let back: SessionSnapshot = serde_json::from_str(&text).unwrap();
        let r = RoutingSession::restore(g, &back).unwrap();
        assert_eq!(r.engaged(), s.engaged());
        assert_eq!(r.blacklisted(), s.blacklisted());
        assert_eq!(r.allocated(), s.allocated());
        assert_eq!(r.snapshot(), snap);
    }

    #[test]
    fn snapshot_refuses_other_graph() {
        let s = RoutingSession::new(build_hex_network(&NetworkSpec::cells(3)).unwrap());
        let snap = s.snapshot();
        let other = build_hex_network(&NetworkSpec::cells(1)).unwrap();
        assert!(matches!(
            RoutingSession::restore(other, &snap),
            Err(RoutingError::FingerprintMismatch { .. })
        ));
    }
}
