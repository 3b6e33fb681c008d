mod common;

use common::*;
use meshroute::error::RoutingError;
use meshroute::mesh::{node, Circle, MeshGraph, NodeId, Path, UnitId};
use meshroute::routing::{
    build_hash_list, enumerate_fabric_permutations, hash_list_route, FaultStrategy, RouteOutcome, RoutingSession,
    Unroutable,
};
use meshroute::search::dfs_shortest_path;
use meshroute::topology::{build_switch_fabric, FabricTopology, SwitchFabricSpec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

fn net5() -> Arc<MeshGraph> {
    static G: OnceLock<Arc<MeshGraph>> = OnceLock::new();
    G.get_or_init(|| Arc::new(hex(5))).clone()
}

fn pairs(names: &[(&str, &str)]) -> Vec<(NodeId, NodeId)> {
    names.iter().map(|(a, b)| (node(a), node(b))).collect()
}

fn assert_disjoint<'a>(paths: impl IntoIterator<Item = &'a Path>) {
    let mut seen = BTreeSet::new();
    for p in paths {
        for n in &p.nodes {
            assert!(seen.insert(*n), "{n} used twice");
        }
    }
}

fn multi(names: &[(&str, &str)]) -> (usize, Vec<i64>) {
    let mut s = RoutingSession::new(net5());
    let r = s.route_multi(&pairs(names)).unwrap();
    assert_disjoint(r.paths());
    for p in r.paths() {
        assert!(physical(&p.nodes));
    }
    (r.routed(), r.paths().map(|p| p.total_weight).collect())
}

#[test]
fn reference_multi_route_cases() {
    let one = multi(&[("of33", "oe01"), ("oe33", "of01"), ("of11", "oe02"), ("oe21", "of02")]);
    assert_eq!(one.0, 4);
    let two = multi(&[
        ("of33", "oe01"),
        ("oe33", "of01"),
        ("of11", "of02"),
        ("oe21", "oe02"),
        ("oe23", "of42"),
        ("of13", "oe52"),
    ]);
    assert_eq!(two.0, 6);
    let three = multi(&[
        ("of33", "oe01"),
        ("oe33", "of01"),
        ("of11", "of52"),
        ("oe21", "oe42"),
        ("of34", "oe02"),
        ("oe34", "of02"),
        ("oe13", "oe54"),
    ]);
    assert_eq!(three.0, 7);
}

#[test]
fn reference_pair_orders() {
    let first = multi(&[
        ("oe23", "of42"),
        ("of13", "oe52"),
        ("of33", "oe01"),
        ("oe33", "of01"),
        ("oe21", "oe02"),
        ("of11", "oe52"),
        ("of34", "oe11"),
    ]);
    let second = multi(&[
        ("of33", "oe01"),
        ("oe33", "of01"),
        ("oe21", "oe02"),
        ("of11", "of02"),
        ("of34", "oe11"),
        ("oe23", "of42"),
        ("of13", "oe52"),
    ]);
    assert_eq!((first.0, second.0), (5, 6));
}

#[test]
fn engagement_changes_the_route() {
    let g = net5();
    let alone = dfs_shortest_path(&g, node("oe33"), node("of01"), &BTreeSet::new())
        .unwrap()
        .unwrap();
    let mut s = RoutingSession::new(g);
    s.route(node("of33"), node("oe01")).unwrap();
    let shared = s.route(node("oe33"), node("of01")).unwrap();
    let p = shared.path().unwrap();
    assert!(p
        .nodes
        .iter()
        .all(|n| s.allocated().values().filter(|q| q.nodes.contains(n)).count() == 1));
    assert_ne!(p.nodes, alone.nodes);
}

#[test]
fn endpoint_reasons() {
    let mut s = RoutingSession::new(net5());
    s.route(node("of33"), node("oe01")).unwrap();
    let r = s.route(node("of33"), node("of01")).unwrap();
    assert!(matches!(r, RouteOutcome::Unroutable(Unroutable::EndpointEngaged(_))));
    s.apply_fault("o.0.1".parse().unwrap(), FaultStrategy::Blacklist)
        .unwrap();
    let r = s.route(node("oe21"), node("of01")).unwrap();
    assert!(matches!(
        r,
        RouteOutcome::Unroutable(Unroutable::EndpointBlacklisted(_))
    ));
    assert!(matches!(
        s.route(node("ia00"), node("of01")),
        Err(RoutingError::NotAPort(_))
    ));
}

#[test]
fn blacklisted_unit_is_never_used() {
    let g = net5();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let units: Vec<UnitId> = g.units().map(|u| u.id).collect();
    for &bad in units.choose_multiple(&mut rng, 12) {
        let mut s = RoutingSession::new(g.clone());
        s.apply_fault(bad, FaultStrategy::Blacklist).unwrap();
        let ports: Vec<NodeId> = free_ports(&g)
            .into_iter()
            .filter(|p| !s.blacklisted().contains(p))
            .collect();
        for (a, b) in random_pairs(&ports, 30, &mut rng) {
            if let RouteOutcome::Routed { id, path } = s.route(a, b).unwrap() {
                assert!(path.nodes.iter().all(|n| !s.blacklisted().contains(n)));
                assert!(path.units().all(|u| u != bad));
                s.release_path(id).unwrap();
            }
        }
    }
}

/// Removing a unit and blacklisting it leave the same routes between ports
/// that do not belong to it.
#[test]
fn fault_strategies_agree() {
    for cells in 1..=3 {
        let g = Arc::new(hex(cells));
        let ports = all_ports(&g);
        for u in g.units() {
            let own: BTreeSet<NodeId> = u.nodes.iter().filter_map(|n| g.resolve(*n)).collect();
            let mut black = RoutingSession::new(g.clone());
            black.apply_fault(u.id, FaultStrategy::Blacklist).unwrap();
            let mut removed = RoutingSession::new(g.clone());
            removed.apply_fault(u.id, FaultStrategy::RemoveUnit).unwrap();
            for &a in &ports {
                for &b in &ports {
                    if a >= b || own.contains(&a) || own.contains(&b) {
                        continue;
                    }
                    let weight = |s: &mut RoutingSession| match s.route(a, b).unwrap() {
                        RouteOutcome::Routed { id, path } => {
                            s.release_path(id).unwrap();
                            Some(path.total_weight)
                        }
                        RouteOutcome::Unroutable(_) => None,
                    };
                    assert_eq!(
                        weight(&mut black),
                        weight(&mut removed),
                        "{cells}-cell {} {a}->{b}",
                        u.id
                    );
                }
            }
            assert!(black.engaged().is_empty() && removed.engaged().is_empty());
        }
    }
}

#[test]
fn inflated_unit_is_avoided_when_possible() {
    let g = net5();
    let base = dfs_shortest_path(&g, node("of33"), node("of01"), &BTreeSet::new())
        .unwrap()
        .unwrap();
    let hot = base.units().find(|u| u.circle == Circle::Inner).unwrap();
    let mut s = RoutingSession::new(g);
    s.apply_fault(hot, FaultStrategy::InflateWeights { penalty: 10_000 })
        .unwrap();
    let p = s.route(node("of33"), node("of01")).unwrap().path().cloned().unwrap();
    assert!(p.units().all(|u| u != hot), "{}", p.compact());
    assert!(matches!(
        s.apply_fault(hot, FaultStrategy::InflateWeights { penalty: 0 }),
        Err(RoutingError::InvalidPenalty)
    ));
}

#[test]
fn snapshot_round_trip() {
    let g = net5();
    let mut s = RoutingSession::new(g.clone());
    let units: Vec<UnitId> = g.units().map(|u| u.id).collect();
    s.apply_fault(units[30], FaultStrategy::RemoveUnit).unwrap();
    s.apply_fault(units[20], FaultStrategy::Blacklist).unwrap();
    s.route_multi(&pairs(&[("of33", "oe01"), ("oe33", "of01"), ("of11", "of52")]))
        .unwrap();
    let snap = s.snapshot();
    let back = RoutingSession::restore(g, &snap).unwrap();
    assert_eq!(back.snapshot(), snap);
    assert_eq!(back.allocated(), s.allocated());
    assert!(matches!(
        RoutingSession::restore(hex(3), &snap),
        Err(RoutingError::FingerprintMismatch { .. })
    ));
}

#[test]
fn fabric_enumeration_matches_oracle() {
    for topology in [FabricTopology::Benes, FabricTopology::Crossbar] {
        let f = build_switch_fabric(SwitchFabricSpec { n: 4, topology }).unwrap();
        let e = enumerate_fabric_permutations(&f).unwrap();
        let got: BTreeSet<Vec<usize>> = e.permutations.keys().cloned().collect();
        assert_eq!(got, fabric_oracle(&f), "{topology:?}");
        for paths in e.permutations.values() {
            assert_disjoint(paths);
        }
    }
}

/// Routing a realisable permutation from the stored path lists works in the
/// same order the live search used.
#[test]
fn hash_list_realises_benes_permutations() {
    let f = build_switch_fabric(SwitchFabricSpec {
        n: 4,
        topology: FabricTopology::Benes,
    })
    .unwrap();
    let g = Arc::new(f.graph.clone());
    let list = build_hash_list(&g, &f.inputs, &f.outputs).unwrap();
    assert_eq!(list.len(), 16);
    let e = enumerate_fabric_permutations(&f).unwrap();
    assert_eq!(e.permutations.len(), 24);
    for (perm, live) in &e.permutations {
        let mut s = RoutingSession::new(g.clone());
        let order: Vec<(NodeId, NodeId)> = live.iter().map(|p| (p.source(), p.target())).collect();
        let mut stored = Vec::new();
        for &(a, b) in &order {
            let out = hash_list_route(&list, &mut s, a, b).unwrap();
            stored.extend(out.path().cloned());
        }
        assert_eq!(stored.len(), 4, "{perm:?}");
        assert_disjoint(&stored);
        for p in &stored {
            assert!(list.lookup(p.source(), p.target()).unwrap().paths.contains(p));
        }
    }
}

#[test]
fn hash_list_first_path_is_live_shortest() {
    let g = net5();
    let ports: Vec<NodeId> = ["of33", "oe33", "of11", "oe21"].map(node).into();
    let outs: Vec<NodeId> = ["oe01", "of01", "of52", "oe42"].map(node).into();
    let list = build_hash_list(&g, &ports, &outs).unwrap();
    for e in &list.entries {
        let live = dfs_shortest_path(&g, e.input, e.output, &BTreeSet::new()).unwrap();
        assert_eq!(e.paths.first().map(|p| p.total_weight), live.map(|p| p.total_weight));
    }
    let mut other = RoutingSession::new(Arc::new(hex(3)));
    assert!(matches!(
        hash_list_route(&list, &mut other, node("of3"), node("oe3")),
        Err(RoutingError::FingerprintMismatch { .. })
    ));
    let mut s = RoutingSession::new(g);
    assert!(matches!(
        hash_list_route(&list, &mut s, node("of01"), node("of33")),
        Err(RoutingError::PairAbsent(..))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_never_share_nodes(seed in any::<u64>(), k in 2usize..10) {
        let g = net5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ports = free_ports(&g);
        let picked: Vec<NodeId> = ports.choose_multiple(&mut rng, 2 * k).copied().collect();
        let order: Vec<(NodeId, NodeId)> = picked.chunks(2).map(|c| (c[0], c[1])).collect();
        let mut s = RoutingSession::new(g.clone());
        let r = s.route_multi(&order).unwrap();
        let mut seen = BTreeSet::new();
        for p in r.paths() {
            prop_assert!(physical(&p.nodes));
            for n in &p.nodes {
                prop_assert!(seen.insert(*n));
            }
        }
        prop_assert_eq!(&seen, s.engaged());

        // replaying the same order gives the same routes
        let mut again = RoutingSession::new(g.clone());
        let r2 = again.route_multi(&order).unwrap();
        prop_assert_eq!(r.paths().collect::<Vec<_>>(), r2.paths().collect::<Vec<_>>());

        // the engaged set is the union of live allocations
        let ids: Vec<u64> = s.allocated().keys().copied().collect();
        for id in ids.iter().step_by(2) {
            s.release_path(*id).unwrap();
        }
        let union: BTreeSet<NodeId> = s.allocated().values().flat_map(|p| p.nodes.iter().copied()).collect();
        prop_assert_eq!(&union, s.engaged());
        for id in ids.iter().step_by(2) {
            prop_assert!(matches!(s.release_path(*id), Err(RoutingError::UnknownRequest(_))));
        }
    }

    #[test]
    fn engage_rejects_overlap(seed in any::<u64>()) {
        let g = net5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = random_pairs(&free_ports(&g), 1, &mut rng)[0];
        let Some(p) = dfs_shortest_path(&g, a, b, &BTreeSet::new()).unwrap() else { return Ok(()) };
        let mut s = RoutingSession::new(g);
        let id = s.engage_path(&p).unwrap();
        prop_assert!(matches!(s.engage_path(&p), Err(RoutingError::Overlap(_))));
        s.release_path(id).unwrap();
        prop_assert!(s.engaged().is_empty());
        prop_assert!(s.engage_path(&p).is_ok());
    }
}
