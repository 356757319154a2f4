//! Planar geometry kernel: Euclidean distance, constant-speed interpolation
//! and the synchronized Euclidean distance (SED).

use crate::error::{Error, Result};
use crate::types::{Point, Position};

/// Euclidean distance between two planar positions.
#[inline]
pub fn dist(a: Position, b: Position) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Position at `time` of an object moving at constant speed from `a` to `b`.
#[inline]
pub fn pos(a: &Point, b: &Point, time: f64) -> Result<Position> {
    if !(a.ts < b.ts) || !(a.ts <= time && time <= b.ts) {
        return Err(Error::InvalidSegment {
            a_ts: a.ts,
            b_ts: b.ts,
            time,
        });
    }
    Ok(lerp(a, b, time))
}

#[inline]
pub(crate) fn lerp(a: &Point, b: &Point, time: f64) -> Position {
    let dt = time - a.ts;
    let span = b.ts - a.ts;
    Position::new(
        a.x + (b.x - a.x) / span * dt,
        a.y + (b.y - a.y) / span * dt,
    )
}

/// Distance between `x` and where it would be at `x.ts` moving at constant
/// speed from `a` to `b`.
#[inline]
pub fn sed(a: &Point, x: &Point, b: &Point) -> Result<f64> {
    if !(a.ts <= x.ts && x.ts <= b.ts) {
        return Err(Error::InvalidSegment {
            a_ts: a.ts,
            b_ts: b.ts,
            time: x.ts,
        });
    }
    Ok(dist(x.pos(), pos(a, b, x.ts)?))
}

/// Position of a piecewise-linear sequence at time `t`.
///
/// Returns the stored position exactly when `t` hits a stored timestamp,
/// otherwise interpolates between the last point at or before `t` and the
/// first point at or after it.
pub fn interpolate_at(seq: &[Point], t: f64) -> Result<Position> {
    let (first, last) = match (seq.first(), seq.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptyInput),
    };
    if !(first.ts <= t && t <= last.ts) {
        return Err(Error::OutOfRange {
            t,
            first: first.ts,
            last: last.ts,
        });
    }
    // index of the first point with ts >= t
    let hi = seq.partition_point(|p| p.ts < t);
    let after = &seq[hi];
    if after.ts == t {
        return Ok(after.pos());
    }
    pos(&seq[hi - 1], after, t)
}
