use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::dist;
use crate::types::{OrderGuard, Point, Position, Sample, Samples, TrajectoryId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Predictor {
    /// Constant velocity along the line through the last two kept points.
    #[default]
    TwoPoint,
    /// Reported speed and course of the last kept point.
    SogCog,
}

impl Predictor {
    /// Number of kept predecessors needed for a full prediction.
    pub fn basis_len(self) -> usize {
        match self {
            Predictor::TwoPoint => 2,
            Predictor::SogCog => 1,
        }
    }
}

impl std::str::FromStr for Predictor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-point" | "velocity" => Ok(Predictor::TwoPoint),
            "sog-cog" => Ok(Predictor::SogCog),
            other => Err(Error::Config(format!("unknown predictor '{other}'"))),
        }
    }
}

/// Predicted position at `ts` from the last kept point and the one before.
///
/// Returns `None` when the predictor lacks its basis (fewer than two
/// points for `TwoPoint`, none for `SogCog`).
pub fn estimate_position(
    last: Option<&Point>,
    before_last: Option<&Point>,
    ts: f64,
    predictor: Predictor,
) -> Result<Option<Position>> {
    let Some(last) = last else {
        return Ok(None);
    };
    let dt = ts - last.ts;
    match predictor {
        Predictor::TwoPoint => {
            let Some(prev) = before_last else {
                return Ok(None);
            };
            let span = last.ts - prev.ts;
            Ok(Some(Position::new(
                last.x + (last.x - prev.x) / span * dt,
                last.y + (last.y - prev.y) / span * dt,
            )))
        }
        Predictor::SogCog => {
            let (Some(sog), Some(cog)) = (last.sog, last.cog) else {
                return Err(Error::Schema(format!(
                    "trajectory {} at ts {}: sog/cog required by the sog-cog predictor",
                    last.id, last.ts
                )));
            };
            Ok(Some(Position::new(
                last.x + cog.cos() * sog * dt,
                last.y + cog.sin() * sog * dt,
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrConfig {
    /// Deviation threshold in meters.
    pub epsilon: f64,
    pub predictor: Predictor,
}

impl DrConfig {
    pub fn new(epsilon: f64, predictor: Predictor) -> Result<Self> {
        let cfg = Self { epsilon, predictor };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!(
                "dead reckoning threshold must be > 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Streaming dead reckoning: a point is kept when it deviates from the
/// position predicted by the kept points by more than the threshold.
///
/// The first point of a trajectory is always kept. With a single kept
/// point and the two-point predictor, the prediction is that point's
/// position.
#[derive(Debug)]
pub struct DeadReckoning {
    cfg: DrConfig,
    guard: OrderGuard,
    samples: BTreeMap<TrajectoryId, Vec<Point>>,
}

impl DeadReckoning {
    pub fn new(cfg: DrConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            guard: OrderGuard::default(),
            samples: BTreeMap::new(),
        })
    }

    /// Returns whether `p` was kept.
    pub fn push(&mut self, p: Point) -> Result<bool> {
        self.guard.check(&p)?;
        let s = self.samples.entry(p.id).or_default();
        let keep = match s.last() {
            None => true,
            Some(last) => {
                let before = s.len().checked_sub(2).map(|i| &s[i]);
                let est = estimate_position(Some(last), before, p.ts, self.cfg.predictor)?
                    .unwrap_or_else(|| last.pos());
                dist(est, p.pos()) > self.cfg.epsilon
            }
        };
        if keep {
            s.push(p);
        }
        Ok(keep)
    }

    pub fn finish(self) -> Samples {
        self.samples
            .into_iter()
            .map(|(id, pts)| (id, Sample::new(id, pts)))
            .collect()
    }
}

pub fn dead_reckoning<'a, I>(stream: I, cfg: DrConfig) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    let mut dr = DeadReckoning::new(cfg)?;
    for p in stream {
        dr.push(*p)?;
    }
    Ok(dr.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constant_velocity_keeps_two() {
        let pts: Vec<Point> = (0..20)
            .map(|i| Point::new(1, i as f64, 10.0 * i as f64, 3.0 * i as f64))
            .collect();
        let out = dead_reckoning(&pts, DrConfig::new(1.0, Predictor::TwoPoint).unwrap()).unwrap();
        assert_eq!(out[&1].points, pts[..2].to_vec());
    }

    #[test]
    fn large_threshold_bootstrap_then_exact() {
        // steps of 10 m with threshold 25: third point deviates 30 from the
        // held first point, then prediction is exact
        let pts: Vec<Point> = (0..10)
            .map(|i| Point::new(1, i as f64, 10.0 * i as f64, 0.0))
            .collect();
        let out = dead_reckoning(&pts, DrConfig::new(25.0, Predictor::TwoPoint).unwrap()).unwrap();
        assert_eq!(out[&1].points, vec![pts[0], pts[3]]);
    }

    #[test]
    fn ninety_degree_turn() {
        // east at 10 m/s for 3 steps, then north
        let pts = [
            Point::new(1, 0.0, 0.0, 0.0),
            Point::new(1, 1.0, 10.0, 0.0),
            Point::new(1, 2.0, 20.0, 0.0),
            Point::new(1, 3.0, 20.0, 10.0),
            Point::new(1, 4.0, 20.0, 20.0),
        ];
        let mut dr = DeadReckoning::new(DrConfig::new(5.0, Predictor::TwoPoint).unwrap()).unwrap();
        let kept: Vec<bool> = pts.iter().map(|p| dr.push(*p).unwrap()).collect();
        // predicted (30,0) vs actual (20,10): 10*sqrt(2)
        let dev = dist(Position::new(30.0, 0.0), pts[3].pos());
        assert!((dev - 14.142135623730951).abs() < 1e-9);
        assert_eq!(kept, vec![true, true, false, true, true]);
    }

    #[test]
    fn sog_cog_exact_on_straight_motion() {
        let heading = 0.3f64;
        let speed = 4.0;
        let pts: Vec<Point> = (0..15)
            .map(|i| {
                let t = 2.0 * i as f64;
                Point::new(7, t, speed * heading.cos() * t, speed * heading.sin() * t)
                    .with_motion(speed, heading)
            })
            .collect();
        let out = dead_reckoning(&pts, DrConfig::new(1e-6, Predictor::SogCog).unwrap()).unwrap();
        assert_eq!(out[&7].points, vec![pts[0]]);
    }

    #[test]
    fn sog_cog_requires_motion_fields() {
        let pts = [Point::new(1, 0.0, 0.0, 0.0), Point::new(1, 1.0, 1.0, 0.0)];
        let err = dead_reckoning(&pts, DrConfig::new(1.0, Predictor::SogCog).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn sog_cog_due_east() {
        let p = Point::new(1, 0.0, 0.0, 0.0).with_motion(1.0, 0.0);
        let est = estimate_position(Some(&p), None, 1.0, Predictor::SogCog)
            .unwrap()
            .unwrap();
        assert!((est.x - 1.0).abs() < 1e-12 && est.y.abs() < 1e-12);
        let q = Point::new(1, 0.0, 0.0, 0.0).with_motion(2.0, FRAC_PI_2);
        let est = estimate_position(Some(&q), None, 3.0, Predictor::SogCog)
            .unwrap()
            .unwrap();
        assert!(est.x.abs() < 1e-12 && (est.y - 6.0).abs() < 1e-12);
    }

    #[test]
    fn config_rejects_non_positive() {
        assert!(DrConfig::new(0.0, Predictor::TwoPoint).is_err());
        assert!(DrConfig::new(f64::NAN, Predictor::TwoPoint).is_err());
    }
}
