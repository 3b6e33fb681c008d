use super::merge::Assembly;
use crate::error::MeshError;
use crate::mesh::{make_unit, Circle, Letter, MeshGraph, NodeId, Point, UnitId, UnitState, WeightScheme};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FabricTopology {
    /// Recursive Benes network, `2 log2(n) - 1` stages of `n/2` switches.
    Benes,
    /// Rectangular mesh of `n(n-1)/2` switches in `n` columns.
    Crossbar,
}

impl std::str::FromStr for FabricTopology {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "benes" => Ok(FabricTopology::Benes),
            "crossbar" => Ok(FabricTopology::Crossbar),
            other => Err(format!(
                "unknown fabric topology '{other}' (expected benes or crossbar)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchFabricSpec {
    pub n: usize,
    pub topology: FabricTopology,
}

/// A staged switch network. Switch `k` of stage `s` is unit `s.k.s`
/// (circle `s`, unit index `k`, cell index `s`).
#[derive(Clone, Debug)]
pub struct SwitchFabric {
    pub spec: SwitchFabricSpec,
    pub graph: MeshGraph,
    /// Input ports, line order.
    pub inputs: Vec<NodeId>,
    /// Output ports, line order.
    pub outputs: Vec<NodeId>,
    pub stages: usize,
}

impl SwitchFabric {
    pub fn switches(&self) -> Vec<UnitId> {
        self.graph.units().map(|u| u.id).collect()
    }

    /// Output line reached from each input line when the switches hold
    /// `states`. Switches missing from the map are in the bar state.
    pub fn propagate(&self, states: &BTreeMap<UnitId, UnitState>) -> Vec<usize> {
        let g = &self.graph;
        let mut entry: HashMap<NodeId, (UnitId, Letter)> = HashMap::new();
        for u in g.units() {
            for l in [Letter::E, Letter::F] {
                if let Some(p) = g.resolve(u.node(l)) {
                    entry.insert(p, (u.id, l));
                }
            }
        }
        let out_line: HashMap<NodeId, usize> = self.outputs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        self.inputs
            .iter()
            .map(|&start| {
                let mut port = start;
                loop {
                    if let Some(&i) = out_line.get(&port) {
                        break i;
                    }
                    let (unit, l) = entry[&port];
                    let cross = states.get(&unit) == Some(&UnitState::Cross);
                    let exit = match (l, cross) {
                        (Letter::E, true) | (Letter::F, false) => Letter::G,
                        _ => Letter::H,
                    };
                    port = g.resolve(unit.node(exit)).expect("switch ports exist");
                }
            })
            .collect()
    }
}

struct Builder {
    asm: Assembly,
    stages: usize,
}

impl Builder {
    fn switch(&mut self, stage: u32, row: u32) -> UnitId {
        let pos = Point::new(3.0 * stage as f64, -2.0 * row as f64);
        let u = make_unit(row, stage, Circle::Switch, pos, 0.0);
        let id = u.id;
        self.asm.units.push(u);
        self.stages = self.stages.max(stage as usize + 1);
        id
    }

    /// Feed `line` into a port, or register the port as a fabric input.
    fn feed(&mut self, line: Option<NodeId>, port: NodeId, inputs: &mut Vec<NodeId>) {
        match line {
            Some(prev) => self.asm.links.push((prev, port)),
            None => inputs.push(port),
        }
    }

    fn benes(
        &mut self,
        n: usize,
        stage: u32,
        row: u32,
        lines: &[Option<NodeId>],
        inputs: &mut Vec<NodeId>,
    ) -> Vec<NodeId> {
        let half = n / 2;
        if n == 2 {
            let u = self.switch(stage, row);
            self.feed(lines[0], u.node(Letter::E), inputs);
            self.feed(lines[1], u.node(Letter::F), inputs);
            return vec![u.node(Letter::G), u.node(Letter::H)];
        }
        let mut upper = Vec::with_capacity(half);
        let mut lower = Vec::with_capacity(half);
        for i in 0..half {
            let u = self.switch(stage, row + i as u32);
            self.feed(lines[2 * i], u.node(Letter::E), inputs);
            self.feed(lines[2 * i + 1], u.node(Letter::F), inputs);
            upper.push(Some(u.node(Letter::G)));
            lower.push(Some(u.node(Letter::H)));
        }
        let up = self.benes(half, stage + 1, row, &upper, inputs);
        let lo = self.benes(half, stage + 1, row + (half / 2) as u32, &lower, inputs);
        let last = stage + 2 * n.trailing_zeros() - 2;
        let mut out = Vec::with_capacity(n);
        for i in 0..half {
            let u = self.switch(last, row + i as u32);
            self.asm.links.push((up[i], u.node(Letter::E)));
            self.asm.links.push((lo[i], u.node(Letter::F)));
            out.push(u.node(Letter::G));
            out.push(u.node(Letter::H));
        }
        out
    }

    fn crossbar(&mut self, n: usize, inputs: &mut [Option<NodeId>]) -> Vec<NodeId> {
        let mut lines: Vec<Option<NodeId>> = vec![None; n];
        for stage in 0..n {
            let mut k = stage % 2;
            while k + 1 < n {
                let u = self.switch(stage as u32, (k / 2) as u32);
                for (line, letter) in [(k, Letter::E), (k + 1, Letter::F)] {
                    let port = u.node(letter);
                    match lines[line] {
                        Some(prev) => self.asm.links.push((prev, port)),
                        None => inputs[line] = Some(port),
                    }
                }
                lines[k] = Some(u.node(Letter::G));
                lines[k + 1] = Some(u.node(Letter::H));
                k += 2;
            }
        }
        lines
            .into_iter()
            .map(|l| l.expect("every line meets a switch"))
            .collect()
    }
}

pub fn build_switch_fabric(spec: SwitchFabricSpec) -> Result<SwitchFabric, MeshError> {
    let mut b = Builder {
        asm: Assembly::new(WeightScheme::derive()),
        stages: 0,
    };
    let (inputs, outputs) = match spec.topology {
        FabricTopology::Benes => {
            if spec.n < 2 || !spec.n.is_power_of_two() {
                return Err(MeshError::UnsupportedFabric(format!(
                    "Benes needs a power of two of at least 2 ports, got {}",
                    spec.n
                )));
            }
            let mut inputs = Vec::with_capacity(spec.n);
            let outputs = b.benes(spec.n, 0, 0, &vec![None; spec.n], &mut inputs);
            (inputs, outputs)
        }
        FabricTopology::Crossbar => {
            if spec.n < 2 {
                return Err(MeshError::UnsupportedFabric(format!(
                    "crossbar needs at least 2 ports, got {}",
                    spec.n
                )));
            }
            let mut inputs = vec![None; spec.n];
            let outputs = b.crossbar(spec.n, &mut inputs);
            (inputs.into_iter().map(|p| p.expect("input port")).collect(), outputs)
        }
    };
    let stages = b.stages;
    let graph = b.asm.build()?;
    let resolve =
        |v: Vec<NodeId>| -> Result<Vec<NodeId>, MeshError> { v.into_iter().map(|n| graph.resolve_or_err(n)).collect() };
    Ok(SwitchFabric {
        spec,
        inputs: resolve(inputs)?,
        outputs: resolve(outputs)?,
        stages,
        graph,
    })
}
