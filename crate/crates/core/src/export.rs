//! Graph serialisation: JSON for round trips, DOT for pictures.

use crate::error::MeshError;
use crate::mesh::{MeshGraph, MziUnit, NodeId, Path, Point, PruneRule, UnitId, WeightScheme};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Dot,
    StructuredText,
}

const FORMAT_TAG: &str = "meshroute-graph";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: NodeId,
    x: f64,
    y: f64,
    role: String,
    owners: Vec<UnitId>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    u: NodeId,
    v: NodeId,
    w: i64,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    format: String,
    version: u32,
    scheme: WeightScheme,
    prune: PruneRule,
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    units: Vec<MziUnit>,
    aliases: BTreeMap<NodeId, NodeId>,
}

pub fn to_json(g: &MeshGraph) -> String {
    let file = GraphFile {
        format: FORMAT_TAG.into(),
        version: FORMAT_VERSION,
        scheme: g.scheme(),
        prune: g.prune_rule(),
        nodes: g
            .nodes()
            .iter()
            .map(|&n| {
                let p = g.position(n).unwrap_or_default();
                NodeRecord {
                    id: n,
                    x: p.x,
                    y: p.y,
                    role: if n.is_primary() { "primary" } else { "dummy" }.into(),
                    owners: g.owners(n).to_vec(),
                }
            })
            .collect(),
        edges: g.edges().map(|(u, v, w)| EdgeRecord { u, v, w }).collect(),
        units: g.units().cloned().collect(),
        aliases: g.aliases().clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("graph serialises");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<MeshGraph, MeshError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| MeshError::Format(e.to_string()))?;
    if file.format != FORMAT_TAG {
        return Err(MeshError::Format(format!(
            "not a graph file (format '{}')",
            file.format
        )));
    }
    if file.version != FORMAT_VERSION {
        return Err(MeshError::Format(format!(
            "unsupported graph file version {}",
            file.version
        )));
    }
    let nodes = file.nodes.iter().map(|r| (r.id, Point::new(r.x, r.y))).collect();
    let edges = file.edges.iter().map(|e| ((e.u, e.v), e.w)).collect();
    let units = file.units.into_iter().map(|u| (u.id, u)).collect();
    MeshGraph::from_parts(file.scheme, nodes, edges, units, file.aliases, file.prune)
}

/// SHA-256 of the JSON export, hex encoded.
pub fn fingerprint(g: &MeshGraph) -> String {
    let digest = Sha256::digest(to_json(g).as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

const PALETTE: [&str; 8] = [
    "red",
    "green3",
    "blueviolet",
    "orange",
    "blue",
    "magenta",
    "cyan4",
    "goldenrod",
];

/// DOT text with dummy nodes dashed. Each overlay path gets its own colour
/// and a legend entry with its weight.
pub fn to_dot(g: &MeshGraph, overlays: &[Path]) -> String {
    let mut on_path: HashMap<(NodeId, NodeId), usize> = HashMap::new();
    for (k, p) in overlays.iter().enumerate() {
        for w in p.nodes.windows(2) {
            let key = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
            on_path.entry(key).or_insert(k);
        }
    }
    let mut s = String::new();
    s.push_str("graph mesh {\n");
    s.push_str("  graph [overlap=true, splines=false];\n");
    s.push_str("  node [shape=circle, width=0.08, fixedsize=true, fontsize=6, label=\"\"];\n");
    for &n in g.nodes() {
        let p = g.position(n).unwrap_or_default();
        let style = if n.is_primary() { "solid" } else { "dashed" };
        let _ = writeln!(
            s,
            "  \"{n}\" [pos=\"{:.4},{:.4}!\", style={style}, tooltip=\"{}\"];",
            p.x * 2.0,
            p.y * 2.0,
            n.compact().unwrap_or_else(|| n.to_string())
        );
    }
    for (u, v, w) in g.edges() {
        let style = if u.is_dummy() || v.is_dummy() {
            "dashed"
        } else {
            "solid"
        };
        match on_path.get(&(u, v)) {
            Some(&k) => {
                let _ = writeln!(
                    s,
                    "  \"{u}\" -- \"{v}\" [weight={w}, style={style}, color={}, penwidth=2.5];",
                    PALETTE[k % PALETTE.len()]
                );
            }
            None => {
                let _ = writeln!(s, "  \"{u}\" -- \"{v}\" [weight={w}, style={style}, color=gray60];");
            }
        }
    }
    if !overlays.is_empty() {
        s.push_str("  subgraph cluster_legend {\n    label=\"paths\";\n");
        for (k, p) in overlays.iter().enumerate() {
            let _ = writeln!(
                s,
                "    \"legend{k}\" [shape=plaintext, width=1.5, fontsize=10, fontcolor={}, label=\"path {}: weight {}\"];",
                PALETTE[k % PALETTE.len()],
                k + 1,
                p.total_weight
            );
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

pub fn export_graph(g: &MeshGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => to_dot(g, &[]),
        ExportFormat::StructuredText => to_json(g),
    }
}
