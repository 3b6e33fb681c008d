use super::merge::Assembly;
use crate::error::MeshError;
use crate::mesh::{make_unit_shaped, Circle, MeshGraph, MziUnit, Point, UnitId, UnitShape, WeightScheme};
use serde::{Deserialize, Serialize};

/// Angle of the vertex where inner unit 0 starts. Both rings are numbered
/// counter-clockwise.
pub const INNER_START: f64 = 0.0;
/// Angle between an inner unit's midpoint and the spoke with the same index.
pub const DEFAULT_OUTER_OFFSET: f64 = 30.0;

/// Ring geometry shared by every cell of a network.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CellGeometry {
    /// Distance from the cell centre to the middle of each inner unit.
    pub r_inner: f64,
    /// Distance from the cell centre to the middle of each outer unit.
    pub r_outer: f64,
    pub n_inner: u32,
    pub n_outer: u32,
    /// Degrees the outer ring is turned back from the inner ring's unit midpoints.
    pub outer_offset: f64,
}

impl Default for CellGeometry {
    fn default() -> Self {
        CellGeometry {
            r_inner: 3f64.sqrt() / 2.0,
            r_outer: 1.5,
            n_inner: 6,
            n_outer: 6,
            outer_offset: DEFAULT_OUTER_OFFSET,
        }
    }
}

impl CellGeometry {
    pub fn validate(&self) -> Result<(), MeshError> {
        if self.n_inner < 1 {
            return Err(MeshError::Geometry("n_inner must be at least 1".into()));
        }
        if !(self.r_inner > 0.0 && self.r_outer > self.r_inner) {
            return Err(MeshError::Geometry(format!(
                "radii must satisfy r_outer > r_inner > 0 (got {} and {})",
                self.r_outer, self.r_inner
            )));
        }
        if self.n_outer > 0 && self.r_outer <= self.vertex_radius() {
            return Err(MeshError::Geometry(format!(
                "r_outer {} does not clear the inner ring vertices at {}",
                self.r_outer,
                self.vertex_radius()
            )));
        }
        Ok(())
    }

    fn polygon_sides(&self) -> f64 {
        // one or two inner units cannot close a polygon; lay them out as
        // hexagon sides instead
        if self.n_inner >= 3 {
            self.n_inner as f64
        } else {
            6.0
        }
    }

    /// Distance from the centre to the inner ring's corners.
    pub fn vertex_radius(&self) -> f64 {
        self.r_inner / (std::f64::consts::PI / self.polygon_sides()).cos()
    }

    /// Length of an inner unit.
    pub fn side(&self) -> f64 {
        2.0 * self.r_inner * (std::f64::consts::PI / self.polygon_sides()).tan()
    }

    pub fn spoke_length(&self) -> f64 {
        2.0 * (self.r_outer - self.vertex_radius())
    }

    /// Centre-to-centre distance of neighbouring cells.
    pub fn lattice_spacing(&self) -> f64 {
        2.0 * self.r_inner
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub cell_index: u32,
    pub center: Point,
    #[serde(flatten)]
    pub geometry: CellGeometry,
}

impl Default for CellSpec {
    fn default() -> Self {
        CellSpec {
            cell_index: 0,
            center: Point::ORIGIN,
            geometry: CellGeometry::default(),
        }
    }
}

impl CellSpec {
    /// The inner ring as tangential units, then the outer ring as spokes.
    pub fn units(&self) -> Result<Vec<MziUnit>, MeshError> {
        let g = &self.geometry;
        g.validate()?;
        let side = g.side();
        let step_in = 360.0 / g.n_inner as f64;
        let mut out = Vec::with_capacity((g.n_inner + g.n_outer) as usize);
        let mut inner = UnitShape::with_length(side);
        inner.mirror = true;
        for r in 0..g.n_inner {
            let mid = INNER_START + step_in * (r as f64 + 0.5);
            let center = self.center.add(Point::polar(g.r_inner, mid));
            // counter-clockwise travel along the ring
            let orientation = mid + 90.0;
            out.push(make_unit_shaped(
                UnitId::new(Circle::Inner, r, self.cell_index),
                center,
                orientation,
                inner,
            ));
        }
        if g.n_outer > 0 {
            let step_out = 360.0 / g.n_outer as f64;
            let mut shape = UnitShape::with_length(side);
            shape.length = g.spoke_length();
            let first = INNER_START + step_in / 2.0 - g.outer_offset;
            for r in 0..g.n_outer {
                let angle = first + step_out * r as f64;
                let center = self.center.add(Point::polar(g.r_outer, angle));
                // from the free tip towards the inner ring
                out.push(make_unit_shaped(
                    UnitId::new(Circle::Outer, r, self.cell_index),
                    center,
                    angle + 180.0,
                    shape,
                ));
            }
        }
        Ok(out)
    }
}

pub fn build_unit_cell(spec: &CellSpec) -> Result<MeshGraph, MeshError> {
    let mut a = Assembly::new(WeightScheme::derive());
    a.tolerance = Some(super::default_tolerance(&spec.geometry));
    a.units = spec.units()?;
    a.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::node;

    #[test]
    fn default_cell() {
        let g = build_unit_cell(&CellSpec::default()).unwrap();
        assert_eq!(g.unit_count(), 12);
        // 48 primaries, 12 shared corner ports between inner units,
        // 12 more between inner units and spokes, 12 free at spoke tips
        assert_eq!(g.node_count(), 48 + 6 * 3 + 12);
        for n in g.ports() {
            assert!(matches!(g.owners(n).len(), 1 | 2));
        }
    }

    #[test]
    fn geometry_of_default_cell() {
        let g = CellGeometry::default();
        assert!((g.vertex_radius() - 1.0).abs() < 1e-12);
        assert!((g.side() - 1.0).abs() < 1e-12);
        assert!((g.spoke_length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn naming_follows_ring_direction() {
        let g = build_unit_cell(&CellSpec::default()).unwrap();
        // inner unit 0 starts at the east corner
        let e = g.position(node("ie00")).unwrap();
        assert!(e.x > 0.7);
        // tip ports of the spokes are free
        assert_eq!(g.owners(node("oe00")).len(), 1);
        assert_eq!(g.owners(node("of00")).len(), 1);
    }

    #[test]
    fn degenerate_cell_is_one_unit() {
        let spec = CellSpec {
            geometry: CellGeometry {
                n_inner: 1,
                n_outer: 0,
                ..CellGeometry::default()
            },
            ..CellSpec::default()
        };
        let g = build_unit_cell(&spec).unwrap();
        assert_eq!(g.unit_count(), 1);
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn bad_radii() {
        let spec = CellSpec {
            geometry: CellGeometry {
                r_outer: 0.5,
                ..CellGeometry::default()
            },
            ..CellSpec::default()
        };
        assert!(matches!(build_unit_cell(&spec), Err(MeshError::Geometry(_))));
    }
}
