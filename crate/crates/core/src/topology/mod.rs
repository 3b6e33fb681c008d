//! Builders for unit cells, hexagonal networks and switch fabrics.

mod cell;
mod fabric;
mod merge;
mod network;

pub use cell::{build_unit_cell, CellGeometry, CellSpec, DEFAULT_OUTER_OFFSET, INNER_START};
pub use fabric::{build_switch_fabric, FabricTopology, SwitchFabric, SwitchFabricSpec};
pub use network::{build_chain, build_hex_network, resolve_name, Layout, NetworkSpec};

pub(crate) fn default_tolerance(cell: &CellGeometry) -> f64 {
    1e-6 * cell.r_inner
}
