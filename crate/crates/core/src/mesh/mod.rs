//! Graph model of MZI meshes.

mod graph;
mod ids;
mod path;
mod unit;
mod weights;

pub(crate) use graph::NO_UNIT;
pub use graph::{GraphBuilder, MeshGraph, PruneRule};
pub use ids::{node, Circle, Letter, NodeId, UnitId};
pub use path::{is_physical, path_weight, unit_state_of, Path};
pub use unit::{make_unit, make_unit_shaped, MziUnit, Point, UnitShape, UnitState};
pub use weights::{WeightScheme, NONPHYSICAL_TOTAL, PHYSICAL_TOTAL};
