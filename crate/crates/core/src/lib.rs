//! Routing toolkit for MZI-based programmable photonic meshes.

pub mod bench;
pub mod error;
pub mod export;
pub mod mesh;
pub mod routing;
pub mod search;
pub mod topology;

pub use error::{BenchError, MeshError, ParseError, RoutingError, SearchError};
