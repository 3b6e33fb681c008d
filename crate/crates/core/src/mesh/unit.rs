use super::ids::{Circle, Letter, NodeId, UnitId};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, deg: f64) -> Self {
        let t = deg.to_radians();
        Point::new(r * t.cos(), r * t.sin())
    }

    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm()
    }

    pub fn rotate(self, deg: f64) -> Point {
        let (s, c) = deg.to_radians().sin_cos();
        Point::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }

    pub fn midpoint(self, o: Point) -> Point {
        self.add(o).scale(0.5)
    }

    /// Angle of the vector in degrees, in `[0, 360)`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x).to_degrees().rem_euclid(360.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum UnitState {
    #[default]
    Unset,
    Bar,
    Cross,
}

impl UnitState {
    /// State implied by a primary-to-primary crossing.
    ///
    /// `a<->c` and `b<->d` are Cross, `a<->d` and `b<->c` are Bar.
    pub fn of_crossing(x: Letter, y: Letter) -> Option<UnitState> {
        use Letter::*;
        match (x, y) {
            (A, C) | (C, A) | (B, D) | (D, B) => Some(UnitState::Cross),
            (A, D) | (D, A) | (B, C) | (C, B) => Some(UnitState::Bar),
            _ => None,
        }
    }
}

impl std::fmt::Display for UnitState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UnitState::Unset => "unset",
            UnitState::Bar => "bar",
            UnitState::Cross => "cross",
        })
    }
}

/// Local node layout of a unit, in units of its length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitShape {
    pub length: f64,
    /// Distance of a port from the unit end, along the 60 degree bisector.
    pub port: f64,
    /// Half separation of the two primary lanes.
    pub lane: f64,
    /// Swap the left and right lanes.
    pub mirror: bool,
}

impl Default for UnitShape {
    fn default() -> Self {
        UnitShape::with_length(1.0)
    }
}

impl UnitShape {
    pub fn with_length(length: f64) -> Self {
        UnitShape {
            length,
            port: 0.2 * length,
            lane: 0.1 * length,
            mirror: false,
        }
    }

    /// Offset of each letter from the unit centre before rotation.
    ///
    /// `e,f` (and `a,b`) sit at the start end, `g,h` (and `c,d`) at the far end.
    pub fn local(&self, letter: Letter) -> Point {
        let half = self.length / 2.0;
        let q = self.length / 4.0;
        let px = self.port / 2.0;
        let py = self.port * 3f64.sqrt() / 2.0;
        let (x, y) = match letter {
            Letter::A => (-q, self.lane),
            Letter::B => (-q, -self.lane),
            Letter::C => (q, self.lane),
            Letter::D => (q, -self.lane),
            Letter::E => (-half + px, py),
            Letter::F => (-half + px, -py),
            Letter::G => (half - px, py),
            Letter::H => (half - px, -py),
        };
        Point::new(x, if self.mirror { -y } else { y })
    }
}

/// One 2x2 tunable coupler.
///
/// `nodes` is indexed by letter and holds the graph node each letter resolved
/// to; after merging, a port may carry another unit's name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MziUnit {
    pub id: UnitId,
    pub nodes: [NodeId; 8],
    pub state: UnitState,
    pub position: Point,
    /// Direction from the `e,f` end towards the `g,h` end, degrees.
    pub orientation: f64,
    pub shape: UnitShape,
}

impl MziUnit {
    pub fn node(&self, letter: Letter) -> NodeId {
        self.nodes[letter as usize]
    }

    pub fn primaries(&self) -> [NodeId; 4] {
        [self.nodes[0], self.nodes[1], self.nodes[2], self.nodes[3]]
    }

    pub fn ports(&self) -> [NodeId; 4] {
        [self.nodes[4], self.nodes[5], self.nodes[6], self.nodes[7]]
    }

    /// Absolute position of a letter, from the unit geometry.
    pub fn node_position(&self, letter: Letter) -> Point {
        self.shape.local(letter).rotate(self.orientation).add(self.position)
    }

    /// The eight edges as `(letter, letter)`: four port edges then four internal.
    pub fn edge_letters() -> [(Letter, Letter); 8] {
        use Letter::*;
        [(E, A), (F, B), (G, C), (H, D), (A, C), (A, D), (B, C), (B, D)]
    }
}

pub fn make_unit(unit_index: u32, cell_index: u32, circle: Circle, position: Point, orientation: f64) -> MziUnit {
    make_unit_shaped(
        UnitId::new(circle, unit_index, cell_index),
        position,
        orientation,
        UnitShape::default(),
    )
}

pub fn make_unit_shaped(id: UnitId, position: Point, orientation: f64, shape: UnitShape) -> MziUnit {
    MziUnit {
        id,
        nodes: id.nodes(),
        state: UnitState::Unset,
        position,
        orientation,
        shape,
    }
}
