//! Priority of the improved STTrace variant: the change in time-sampled
//! reconstruction error, measured against the raw trajectory, caused by
//! dropping a sample point.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, interpolate_at, lerp};
use crate::types::{Point, TrajectoryId};

/// Which way round the error difference is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImpSign {
    /// `error(without point) - error(with point)`: cheap points have low
    /// priority and are evicted first.
    #[default]
    ErrorIncrease,
    /// `error(with point) - error(without point)`, the negation.
    WithMinusWithout,
}

impl std::str::FromStr for ImpSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increase" | "error-increase" => Ok(ImpSign::ErrorIncrease),
            "printed" | "with-minus-without" => Ok(ImpSign::WithMinusWithout),
            other => Err(Error::Config(format!("unknown imp sign '{other}'"))),
        }
    }
}

/// Priority of `cur` whose sample neighbours are `prev` and `next`.
///
/// Errors are sampled at `prev.ts + k * precision` for `k >= 1` while
/// strictly before `next.ts`; an empty set yields 0. `traj` must hold the
/// raw points covering `[prev.ts, next.ts]`.
pub fn compute_priority_imp(
    prev: &Point,
    cur: &Point,
    next: &Point,
    traj: &[Point],
    precision: f64,
    sign: ImpSign,
) -> Result<f64> {
    let covered = matches!(
        (traj.first(), traj.last()),
        (Some(f), Some(l)) if f.ts <= prev.ts && l.ts >= next.ts
    );
    if !covered {
        return Err(Error::HistoryGap {
            id: cur.id,
            from: prev.ts,
            to: next.ts,
        });
    }

    let mut total = 0.0;
    let mut k = 1.0;
    loop {
        let t = prev.ts + k * precision;
        if t >= next.ts {
            break;
        }
        let actual = interpolate_at(traj, t)?;
        let with = if t < cur.ts {
            lerp(prev, cur, t)
        } else if t > cur.ts {
            lerp(cur, next, t)
        } else {
            cur.pos()
        };
        let without = lerp(prev, next, t);
        total += dist(actual, without) - dist(actual, with);
        k += 1.0;
    }
    Ok(match sign {
        ImpSign::ErrorIncrease => total,
        ImpSign::WithMinusWithout => -total,
    })
}

/// Same as [`compute_priority_imp`] for `sample[l]`, returning infinity
/// when `l` is the first or last sample point.
pub fn imp_priority_in(
    sample: &[Point],
    l: usize,
    traj: &[Point],
    precision: f64,
    sign: ImpSign,
) -> Result<f64> {
    if l == 0 || l + 1 >= sample.len() {
        return Ok(f64::INFINITY);
    }
    compute_priority_imp(&sample[l - 1], &sample[l], &sample[l + 1], traj, precision, sign)
}

/// Raw points kept per trajectory so priorities can be measured against
/// the original motion.
#[derive(Debug, Default, Clone)]
pub struct HistoryBuffer {
    raw: HashMap<TrajectoryId, Vec<Point>>,
}

impl HistoryBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, p: Point) {
        self.raw.entry(p.id).or_default().push(p);
    }

    pub fn get(&self, id: TrajectoryId) -> &[Point] {
        self.raw.get(&id).map_or(&[], Vec::as_slice)
    }

    /// Drops points of `id` older than `before`.
    pub fn prune(&mut self, id: TrajectoryId, before: f64) {
        if let Some(v) = self.raw.get_mut(&id) {
            let k = v.partition_point(|p| p.ts < before);
            v.drain(..k);
        }
    }

    pub fn ids(&self) -> Vec<TrajectoryId> {
        let mut ids: Vec<_> = self.raw.keys().copied().collect();
        ids.sort_unstable();
        ids
    }

    pub fn len(&self) -> usize {
        self.raw.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
