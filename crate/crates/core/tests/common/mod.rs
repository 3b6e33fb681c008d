#![allow(dead_code)]

use meshroute::mesh::{Letter, MeshGraph, NodeId, UnitId};
use meshroute::topology::{build_hex_network, NetworkSpec, SwitchFabric};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn hex(cells: u32) -> MeshGraph {
    build_hex_network(&NetworkSpec::cells(cells)).unwrap()
}

fn side(l: Letter) -> u8 {
    match l {
        Letter::A | Letter::B => 0,
        Letter::C | Letter::D => 1,
        _ => 2,
    }
}

fn same_unit_primaries(x: NodeId, y: NodeId) -> bool {
    x.is_primary() && y.is_primary() && x.unit_id() == y.unit_id()
}

/// Light enters a unit at one primary and leaves from a primary on the
/// other side straight away; nodes never repeat.
pub fn physical(nodes: &[NodeId]) -> bool {
    let closed = nodes.len() > 2 && nodes.first() == nodes.last();
    let body: Vec<NodeId> = if closed {
        // rotate so the sequence starts on a port, which splits no run
        let b = &nodes[..nodes.len() - 1];
        match b.iter().position(|n| n.is_dummy()) {
            Some(k) => b[k..].iter().chain(&b[..k]).copied().collect(),
            None => return false,
        }
    } else {
        nodes.to_vec()
    };
    if body.iter().collect::<BTreeSet<_>>().len() != body.len() {
        return false;
    }
    let mut i = 0;
    while i < body.len() {
        if body[i].is_dummy() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < body.len() && same_unit_primaries(body[j], body[j + 1]) {
            j += 1;
        }
        let run = &body[i..=j];
        let open_end = (!closed && (i == 0 || j == body.len() - 1)) && run.len() == 1;
        if !open_end {
            if run.len() != 2 || side(run[0].letter) == side(run[1].letter) {
                return false;
            }
        }
        i = j + 1;
    }
    true
}

pub fn walk_weight(g: &MeshGraph, nodes: &[NodeId]) -> i64 {
    nodes
        .windows(2)
        .map(|w| g.weight(w[0], w[1]).expect("consecutive nodes are adjacent"))
        .sum()
}

/// Crossings in a walk: steps between two primaries of one unit.
pub fn crossings(nodes: &[NodeId]) -> usize {
    nodes.windows(2).filter(|w| same_unit_primaries(w[0], w[1])).count()
}

/// Three primaries of one unit in a row, the only thing a prefix can do wrong.
fn prefix_broken(p: &[NodeId]) -> bool {
    let n = p.len();
    n >= 3 && same_unit_primaries(p[n - 3], p[n - 2]) && same_unit_primaries(p[n - 2], p[n - 1])
}

/// Every simple path from `s` to `t`, grown node by node and cut as soon as a
/// prefix sees a third primary of one unit in a row. Weights are not used.
pub fn naive_paths(g: &MeshGraph, s: NodeId, t: NodeId) -> BTreeSet<Vec<NodeId>> {
    fn go(
        g: &MeshGraph,
        t: NodeId,
        path: &mut Vec<NodeId>,
        seen: &mut BTreeSet<NodeId>,
        out: &mut BTreeSet<Vec<NodeId>>,
    ) {
        let cur = *path.last().unwrap();
        if cur == t {
            if physical(path) {
                out.insert(path.clone());
            }
            return;
        }
        let next: Vec<NodeId> = g.neighbors(cur).map(|(n, _)| n).collect();
        for n in next {
            if seen.contains(&n) {
                continue;
            }
            path.push(n);
            if !prefix_broken(path) {
                seen.insert(n);
                go(g, t, path, seen, out);
                seen.remove(&n);
            }
            path.pop();
        }
    }
    let mut out = BTreeSet::new();
    let mut seen: BTreeSet<NodeId> = [s].into();
    go(g, t, &mut vec![s], &mut seen, &mut out);
    out
}

/// Ports that belong to exactly one unit.
pub fn free_ports(g: &MeshGraph) -> Vec<NodeId> {
    g.nodes()
        .iter()
        .copied()
        .filter(|n| n.is_dummy() && g.owners(*n).len() == 1)
        .collect()
}

pub fn all_ports(g: &MeshGraph) -> Vec<NodeId> {
    g.nodes().iter().copied().filter(|n| n.is_dummy()).collect()
}

pub fn random_pairs(ports: &[NodeId], k: usize, rng: &mut impl Rng) -> Vec<(NodeId, NodeId)> {
    (0..k)
        .map(|_| {
            let v: Vec<_> = ports.choose_multiple(rng, 2).copied().collect();
            (v[0], v[1])
        })
        .collect()
}

/// Output line of each input under every one of the `2^k` switch settings,
/// found by walking graph edges.
pub fn fabric_oracle(f: &SwitchFabric) -> BTreeSet<Vec<usize>> {
    let g = &f.graph;
    let switches: Vec<UnitId> = g.units().map(|u| u.id).collect();
    let outputs: BTreeMap<NodeId, usize> = f.outputs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << switches.len()) {
        let cross: BTreeMap<UnitId, bool> = switches
            .iter()
            .enumerate()
            .map(|(k, u)| (*u, mask >> k & 1 == 1))
            .collect();
        let perm: Vec<usize> = f
            .inputs
            .iter()
            .map(|&start| {
                let mut port = start;
                let mut came_from: Option<NodeId> = None;
                loop {
                    if let Some(&i) = outputs.get(&port) {
                        if came_from.is_some() {
                            return i;
                        }
                    }
                    let entry = g
                        .neighbors(port)
                        .map(|(n, _)| n)
                        .find(|n| Some(*n) != came_from)
                        .expect("light continues");
                    let straight = matches!(
                        (entry.letter, cross[&entry.unit_id()]),
                        (Letter::A, true) | (Letter::B, true)
                    );
                    let exit_letter = match (entry.letter, straight) {
                        (Letter::A, true) => Letter::C,
                        (Letter::A, false) => Letter::D,
                        (Letter::B, true) => Letter::D,
                        (Letter::B, false) => Letter::C,
                        _ => panic!("light entered a switch at {entry}"),
                    };
                    let exit = NodeId::new(entry.circle, exit_letter, entry.unit, entry.cell);
                    let next_port = g
                        .neighbors(exit)
                        .map(|(n, _)| n)
                        .find(|n| n.is_dummy())
                        .expect("primary has a port");
                    came_from = Some(exit);
                    port = next_port;
                }
            })
            .collect();
        out.insert(perm);
    }
    out
}
