mod common;

use common::*;
use meshroute::bench::{emit_table, run_bench_on, sample_pairs, Algorithm, BenchConfig, TableFormat};
use meshroute::export::{export_graph, fingerprint, from_json, to_dot, to_json, ExportFormat};
use meshroute::mesh::{node, NodeId};
use meshroute::search::dfs_shortest_path;
use meshroute::topology::{build_switch_fabric, FabricTopology, SwitchFabricSpec};
use std::collections::BTreeSet;

#[test]
fn json_round_trip_keeps_searches() {
    let g = hex(5);
    let text = to_json(&g);
    let back = from_json(&text).unwrap();
    assert_eq!(to_json(&back), text);
    assert_eq!(fingerprint(&back), fingerprint(&g));
    assert_eq!(back.unit_count(), 36);
    let p = dfs_shortest_path(&back, node("of33"), node("of01"), &BTreeSet::new())
        .unwrap()
        .unwrap();
    assert_eq!(p.total_weight, 9);
}

#[test]
fn fabric_round_trip() {
    let f = build_switch_fabric(SwitchFabricSpec {
        n: 8,
        topology: FabricTopology::Benes,
    })
    .unwrap();
    let back = from_json(&to_json(&f.graph)).unwrap();
    assert_eq!(fingerprint(&back), fingerprint(&f.graph));
}

#[test]
fn dot_lists_every_node_and_edge() {
    let g = hex(3);
    let dot = to_dot(&g, &[]);
    assert_eq!(dot, export_graph(&g, ExportFormat::Dot));
    assert_eq!(dot.matches(" -- ").count(), g.edge_count());
    assert_eq!(dot.matches("pos=").count(), g.node_count());
    assert!(!dot.contains("legend"));
}

#[test]
fn dot_overlays_are_coloured_and_labelled() {
    let g = hex(5);
    let none = BTreeSet::new();
    let a = dfs_shortest_path(&g, node("of33"), node("of01"), &none)
        .unwrap()
        .unwrap();
    let b = dfs_shortest_path(&g, node("of11"), node("of52"), &none)
        .unwrap()
        .unwrap();
    let dot = to_dot(&g, &[a.clone(), b.clone()]);
    assert_eq!(
        dot.matches("penwidth=2.5").count(),
        a.nodes.len() - 1 + b.nodes.len() - 1
    );
    assert!(dot.contains(&format!("path 1: weight {}", a.total_weight)));
    assert!(dot.contains(&format!("path 2: weight {}", b.total_weight)));
}

#[test]
fn bench_is_reproducible() {
    let g = hex(5);
    let a = sample_pairs(&g, 3, 40).unwrap();
    assert_eq!(a, sample_pairs(&g, 3, 40).unwrap());
    assert_ne!(a, sample_pairs(&g, 4, 40).unwrap());
    let boundary: BTreeSet<NodeId> = g.boundary_ports().collect();
    assert!(a
        .iter()
        .all(|(s, t)| s != t && boundary.contains(s) && boundary.contains(t)));

    let cfg = BenchConfig {
        algorithms: Algorithm::ALL.to_vec(),
        pairs: 10,
        warmup: 0,
        ..BenchConfig::default()
    };
    let r1 = run_bench_on(&g, &cfg).unwrap();
    let r2 = run_bench_on(&g, &cfg).unwrap();
    assert_eq!(r1.pairs, r2.pairs);
    for (x, y) in r1.rows.iter().zip(&r2.rows) {
        assert_eq!(
            (x.algorithm, x.paths_found, x.max_units_traversed, x.total_units),
            (y.algorithm, y.paths_found, y.max_units_traversed, y.total_units)
        );
        assert_eq!(x.total_units, 36);
    }
    let md = emit_table(&r1, TableFormat::Markdown).unwrap();
    assert_eq!(md.lines().count(), 2 + Algorithm::ALL.len());
    let csv = emit_table(&r1, TableFormat::Csv).unwrap();
    assert_eq!(csv.lines().count(), 1 + Algorithm::ALL.len());
}
