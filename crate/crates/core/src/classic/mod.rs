//! Classical (unconstrained) simplification algorithms.

mod dr;
mod squish;
mod sttrace;
mod tdtr;

pub use dr::{dead_reckoning, estimate_position, DeadReckoning, DrConfig, Predictor};
pub use squish::{squish, Squish, SquishConfig};
pub use sttrace::{sttrace, StTrace, StTraceConfig};
pub use tdtr::{tdtr, TdTrConfig};

use crate::geometry::sed;
use crate::store::{NodeId, SampleStore};

/// SED of `n` against its current sample neighbours, or infinity at a
/// sample edge.
pub(crate) fn sed_priority(store: &SampleStore, n: NodeId) -> f64 {
    match (store.prev(n), store.next(n)) {
        (Some(a), Some(b)) => sed(store.point(a), store.point(n), store.point(b))
            .expect("sample points are strictly time ordered"),
        _ => f64::INFINITY,
    }
}
