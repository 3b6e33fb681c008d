//! Multi-pair routing on a shared mesh.

mod fabric;
mod hashlist;
mod session;

pub use fabric::{enumerate_fabric_permutations, FabricEnumeration};
pub use hashlist::{build_hash_list, build_hash_list_for_pairs, hash_list_route, HashEntry, HashList, HashListMeta};
pub use session::{
    Allocation, FaultRecord, FaultStrategy, MultiRouteResult, PairRoute, RouteOutcome, RoutingSession, SessionSnapshot,
    Unroutable,
};
