use meshroute::mesh::{NodeId, Path, UnitId, UnitState};
use meshroute::routing::{MultiRouteResult, RouteOutcome};
use serde::Serialize;
use std::collections::BTreeMap;

/// One path as printed by every subcommand.
#[derive(Debug, Serialize)]
pub struct PathRecord {
    pub nodes: Vec<NodeId>,
    pub weight: i64,
    pub units: usize,
    pub states: BTreeMap<UnitId, UnitState>,
}

impl From<&Path> for PathRecord {
    fn from(p: &Path) -> Self {
        PathRecord {
            nodes: p.nodes.clone(),
            weight: p.total_weight,
            units: p.units_traversed,
            states: p.states_implied.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RouteRecord {
    pub source: NodeId,
    pub target: NodeId,
    /// `routed`, or the reason the pair could not be routed.
    pub status: String,
    pub path: Option<PathRecord>,
}

impl RouteRecord {
    pub fn new(source: NodeId, target: NodeId, outcome: &RouteOutcome) -> Self {
        match outcome {
            RouteOutcome::Routed { path, .. } => RouteRecord {
                source,
                target,
                status: "routed".into(),
                path: Some(path.into()),
            },
            RouteOutcome::Unroutable(why) => RouteRecord {
                source,
                target,
                status: why.to_string(),
                path: None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MultiRecord {
    pub routed: usize,
    pub total: usize,
    pub routes: Vec<RouteRecord>,
}

impl From<&MultiRouteResult> for MultiRecord {
    fn from(r: &MultiRouteResult) -> Self {
        MultiRecord {
            routed: r.routed(),
            total: r.outcomes.len(),
            routes: r
                .outcomes
                .iter()
                .map(|o| RouteRecord::new(o.source, o.target, &o.outcome))
                .collect(),
        }
    }
}

pub fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}
