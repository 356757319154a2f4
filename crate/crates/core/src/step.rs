use crate::types::Point;

/// Priority change applied to a sample neighbour after an eviction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborUpdate {
    pub point: Point,
    pub before: f64,
    pub after: f64,
}

/// A point dropped from its sample and from the queue.
#[derive(Debug, Clone, PartialEq)]
pub struct Eviction {
    pub point: Point,
    pub priority: f64,
    pub neighbors: Vec<NeighborUpdate>,
}

/// Result of feeding one point to a streaming compressor.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Step {
    /// `false` when the point was rejected before entering the sample.
    pub accepted: bool,
    pub eviction: Option<Eviction>,
}

impl Step {
    pub(crate) fn accepted(eviction: Option<Eviction>) -> Self {
        Self {
            accepted: true,
            eviction,
        }
    }

    pub(crate) fn rejected() -> Self {
        Self {
            accepted: false,
            eviction: None,
        }
    }
}

/// A point currently waiting in a priority queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueuedPoint {
    pub point: Point,
    pub priority: f64,
    pub seq: u64,
}
