use super::cell::{CellGeometry, CellSpec};
use super::merge::Assembly;
use crate::error::MeshError;
use crate::mesh::{make_unit, Circle, Letter, MeshGraph, NodeId, Point, UnitId, WeightScheme};
use serde::{Deserialize, Serialize};

/// Where the cells around cell 0 go.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// East side first: NE, SE, NW, SW, N, S, then the same order at
    /// twice the distance, then the rest of each ring.
    #[default]
    Paired,
    /// Neighbours counter-clockwise from north-east, ring by ring.
    Ring,
    /// Axial lattice coordinates for cells 1.. (cell 0 is always at the origin).
    Explicit(Vec<(i32, i32)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkSpec {
    pub num_cells: u32,
    pub cell: CellGeometry,
    /// Defaults to `1e-6 * r_inner`.
    pub merge_tolerance: Option<f64>,
    pub layout: Layout,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        NetworkSpec {
            num_cells: 1,
            cell: CellGeometry::default(),
            merge_tolerance: None,
            layout: Layout::Paired,
        }
    }
}

impl NetworkSpec {
    pub fn cells(num_cells: u32) -> Self {
        NetworkSpec {
            num_cells,
            ..Default::default()
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.merge_tolerance
            .unwrap_or_else(|| super::default_tolerance(&self.cell))
    }

    /// Axial coordinates of every cell, cell 0 first.
    pub fn lattice_slots(&self) -> Result<Vec<(i32, i32)>, MeshError> {
        if self.num_cells < 1 {
            return Err(MeshError::Geometry("num_cells must be at least 1".into()));
        }
        let want = self.num_cells as usize - 1;
        let order: Vec<(i32, i32)> = match &self.layout {
            Layout::Explicit(v) => {
                if v.len() < want {
                    return Err(MeshError::Geometry(format!(
                        "explicit layout lists {} cells, need {}",
                        v.len(),
                        want
                    )));
                }
                v.clone()
            }
            Layout::Ring => ring_order(want),
            Layout::Paired => paired_order(want),
        };
        let mut slots = vec![(0, 0)];
        for s in order.into_iter().take(want) {
            if slots.contains(&s) {
                return Err(MeshError::Geometry(format!("cell slot {s:?} used twice")));
            }
            slots.push(s);
        }
        Ok(slots)
    }

    pub fn cell_specs(&self) -> Result<Vec<CellSpec>, MeshError> {
        let d = self.cell.lattice_spacing();
        let a = Point::polar(d, 30.0);
        let b = Point::polar(d, 90.0);
        Ok(self
            .lattice_slots()?
            .into_iter()
            .enumerate()
            .map(|(q, (i, j))| CellSpec {
                cell_index: q as u32,
                center: a.scale(i as f64).add(b.scale(j as f64)),
                geometry: self.cell,
            })
            .collect())
    }
}

const NE: (i32, i32) = (1, 0);
const N: (i32, i32) = (0, 1);
const NW: (i32, i32) = (-1, 1);
const SW: (i32, i32) = (-1, 0);
const S: (i32, i32) = (0, -1);
const SE: (i32, i32) = (1, -1);

fn times(k: i32, d: (i32, i32)) -> (i32, i32) {
    (k * d.0, k * d.1)
}

fn hex_distance((i, j): (i32, i32)) -> i32 {
    (i.abs() + j.abs() + (i + j).abs()) / 2
}

/// Angle of an axial slot, measured counter-clockwise from the NE direction.
fn slot_angle((i, j): (i32, i32)) -> f64 {
    let a = Point::polar(1.0, 30.0).scale(i as f64);
    let b = Point::polar(1.0, 90.0).scale(j as f64);
    (a.add(b).angle() - 30.0 + 1e-9).rem_euclid(360.0)
}

fn ring(k: i32) -> Vec<(i32, i32)> {
    let mut v: Vec<(i32, i32)> = (-k..=k)
        .flat_map(|i| (-k..=k).map(move |j| (i, j)))
        .filter(|s| hex_distance(*s) == k)
        .collect();
    v.sort_by(|x, y| slot_angle(*x).total_cmp(&slot_angle(*y)));
    v
}

fn ring_order(want: usize) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    let mut k = 1;
    while out.len() < want {
        out.extend(ring(k));
        k += 1;
    }
    out
}

fn paired_order(want: usize) -> Vec<(i32, i32)> {
    let pairs = [NE, SE, NW, SW, N, S];
    let mut out: Vec<(i32, i32)> = pairs.to_vec();
    out.extend(pairs.iter().map(|d| times(2, *d)));
    let mut k = 2;
    while out.len() < want {
        for s in ring(k) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        k += 1;
    }
    out
}

pub fn build_hex_network(spec: &NetworkSpec) -> Result<MeshGraph, MeshError> {
    let mut a = Assembly::new(WeightScheme::derive());
    a.tolerance = Some(spec.tolerance());
    for cell in spec.cell_specs()? {
        a.units.extend(cell.units()?);
    }
    a.build()
}

/// `n` units in a row, each unit's `g,h` fused with the next unit's `e,f`.
pub fn build_chain(n: u32) -> Result<MeshGraph, MeshError> {
    let mut a = Assembly::new(WeightScheme::derive());
    for k in 0..n {
        a.units
            .push(make_unit(k, 0, Circle::Inner, Point::new(k as f64 * 1.5, 0.0), 0.0));
        if k > 0 {
            let prev = UnitId::new(Circle::Inner, k - 1, 0);
            let cur = UnitId::new(Circle::Inner, k, 0);
            a.links.push((prev.node(Letter::G), cur.node(Letter::E)));
            a.links.push((prev.node(Letter::H), cur.node(Letter::F)));
        }
    }
    a.build()
}

/// Name a node the way callers usually write it, e.g. `"of33"`.
pub fn resolve_name(graph: &MeshGraph, text: &str) -> Result<NodeId, MeshError> {
    let n = NodeId::parse(text)?;
    graph.resolve_or_err(n)
}
