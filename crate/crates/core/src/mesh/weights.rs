use serde::{Deserialize, Serialize};

/// Integer edge weights that make nonphysical traversals detectable by sum.
///
/// One physical pass through a unit (`port -> primary -> primary -> port`)
/// costs exactly 1. Visiting a third primary node of the same unit pushes
/// the running weight to at least `threshold`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightScheme {
    pub w_dummy: i64,
    pub w_internal: i64,
    pub w_link: i64,
    pub threshold: i64,
}

/// Weight of one physical pass through a unit.
pub const PHYSICAL_TOTAL: i64 = 1;
/// Weight of `e-a-d-b-c-g`, the shortest nonphysical pass.
pub const NONPHYSICAL_TOTAL: i64 = 4003;

impl WeightScheme {
    /// Solves `2x + y = physical` and `2x + 3y = nonphysical` in integers.
    ///
    /// Returns `None` when the system has no integer solution.
    pub fn from_totals(physical: i64, nonphysical: i64) -> Option<Self> {
        let diff = nonphysical - physical;
        if diff <= 0 || diff % 2 != 0 {
            return None;
        }
        let w_internal = diff / 2;
        let twice_dummy = physical - w_internal;
        if twice_dummy % 2 != 0 {
            return None;
        }
        let w_dummy = twice_dummy / 2;
        Some(WeightScheme {
            w_dummy,
            w_internal,
            w_link: 0,
            // a port edge followed by two internal edges: the first prefix
            // that has touched three primaries of one unit
            threshold: w_dummy + 2 * w_internal,
        })
    }

    pub fn derive() -> Self {
        Self::from_totals(PHYSICAL_TOTAL, NONPHYSICAL_TOTAL).expect("totals have an integer solution")
    }

    /// Weight of one physical single-unit traversal.
    pub fn unit_pass(&self) -> i64 {
        2 * self.w_dummy + self.w_internal
    }

    /// Whether `w` is one of the three base edge weights.
    pub fn is_base_weight(&self, w: i64) -> bool {
        w == self.w_dummy || w == self.w_internal || w == self.w_link
    }
}

impl Default for WeightScheme {
    fn default() -> Self {
        Self::derive()
    }
}
