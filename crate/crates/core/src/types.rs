//! Domain values shared by every algorithm: points, trajectories, samples
//! and globally ordered streams.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type TrajectoryId = u64;

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// One timestamped measurement of a moving object.
///
/// `cog` is in radians with `x` growing with `cos(cog)` and `y` with
/// `sin(cog)`. Ingestion converts compass bearings to this convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: TrajectoryId,
    pub ts: f64,
    pub x: f64,
    pub y: f64,
    pub sog: Option<f64>,
    pub cog: Option<f64>,
}

impl Point {
    pub fn new(id: TrajectoryId, ts: f64, x: f64, y: f64) -> Self {
        Self {
            id,
            ts,
            x,
            y,
            sog: None,
            cog: None,
        }
    }

    pub fn with_motion(mut self, sog: f64, cog: f64) -> Self {
        self.sog = Some(sog);
        self.cog = Some(cog);
        self
    }

    #[inline]
    pub fn pos(&self) -> Position {
        Position::new(self.x, self.y)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.ts.is_finite() || !self.x.is_finite() || !self.y.is_finite() {
            return Err(Error::Schema(format!(
                "trajectory {}: non-finite coordinate or timestamp",
                self.id
            )));
        }
        if let Some(sog) = self.sog {
            if !(sog >= 0.0 && sog.is_finite()) {
                return Err(Error::Schema(format!("trajectory {}: sog {sog} < 0", self.id)));
            }
        }
        if let Some(cog) = self.cog {
            if !(0.0..TAU).contains(&cog) {
                return Err(Error::Schema(format!(
                    "trajectory {}: cog {cog} outside [0, 2pi)",
                    self.id
                )));
            }
        }
        Ok(())
    }

    /// Identity of a stored point: same trajectory, same instant, same place.
    pub fn same_measurement(&self, other: &Point) -> bool {
        self.id == other.id
            && self.ts.to_bits() == other.ts.to_bits()
            && self.x.to_bits() == other.x.to_bits()
            && self.y.to_bits() == other.y.to_bits()
    }
}

/// Time-ordered measurements of one object, strictly increasing in `ts`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    id: TrajectoryId,
    points: Vec<Point>,
}

impl Trajectory {
    pub fn new(id: TrajectoryId, points: Vec<Point>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            p.validate()?;
            if p.id != id {
                return Err(Error::Integrity(format!(
                    "point {i} has id {} but trajectory is {id}",
                    p.id
                )));
            }
            if i > 0 && p.ts <= points[i - 1].ts {
                return Err(Error::Ordering {
                    id,
                    ts: p.ts,
                    previous: points[i - 1].ts,
                });
            }
        }
        Ok(Self { id, points })
    }

    pub fn id(&self) -> TrajectoryId {
        self.id
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

/// Compressed representation of one trajectory: an order-preserving subset
/// of its points.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Sample {
    pub source_id: TrajectoryId,
    pub points: Vec<Point>,
}

impl Sample {
    pub fn new(source_id: TrajectoryId, points: Vec<Point>) -> Self {
        Self { source_id, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks that every sample point appears, in order, in `source`.
    pub fn is_subsequence_of(&self, source: &[Point]) -> bool {
        let mut it = source.iter();
        self.points
            .iter()
            .all(|p| it.by_ref().any(|q| q.same_measurement(p)))
    }
}

pub type Samples = BTreeMap<TrajectoryId, Sample>;
pub type Trajectories = BTreeMap<TrajectoryId, Trajectory>;

/// Points of many trajectories merged into one globally time-ordered
/// sequence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Stream {
    points: Vec<Point>,
}

impl Stream {
    /// Wraps already ordered points, rejecting any decrease in `ts`.
    pub fn from_ordered(points: Vec<Point>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].ts < w[0].ts {
                return Err(Error::Ordering {
                    id: w[1].id,
                    ts: w[1].ts,
                    previous: w[0].ts,
                });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn first_ts(&self) -> Option<f64> {
        self.points.first().map(|p| p.ts)
    }

    pub fn last_ts(&self) -> Option<f64> {
        self.points.last().map(|p| p.ts)
    }
}

impl<'a> IntoIterator for &'a Stream {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Per-trajectory ordering guard used by the streaming algorithms.
#[derive(Debug, Default)]
pub(crate) struct OrderGuard {
    last_global: Option<f64>,
    last_per_id: std::collections::HashMap<TrajectoryId, f64>,
}

impl OrderGuard {
    pub(crate) fn check(&mut self, p: &Point) -> Result<()> {
        p.validate()?;
        if let Some(prev) = self.last_global {
            if p.ts < prev {
                return Err(Error::Ordering {
                    id: p.id,
                    ts: p.ts,
                    previous: prev,
                });
            }
        }
        if let Some(&prev) = self.last_per_id.get(&p.id) {
            if p.ts <= prev {
                return Err(Error::Ordering {
                    id: p.id,
                    ts: p.ts,
                    previous: prev,
                });
            }
        }
        self.last_global = Some(p.ts);
        self.last_per_id.insert(p.id, p.ts);
        Ok(())
    }
}
