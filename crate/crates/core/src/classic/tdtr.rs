use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::sed;
use crate::types::{Sample, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdTrConfig {
    /// Maximum SED in meters tolerated between a dropped point and the
    /// segment that replaces it.
    pub tolerance: f64,
}

impl TdTrConfig {
    pub fn new(tolerance: f64) -> Result<Self> {
        let cfg = Self { tolerance };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 0.0) {
            return Err(Error::Config(format!(
                "td-tr tolerance must be >= 0, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Top-down time-ratio simplification: split each segment at the point of
/// largest SED until every dropped point is within tolerance. Ties go to
/// the earliest point.
pub fn tdtr(t: &Trajectory, cfg: TdTrConfig) -> Result<Sample> {
    cfg.validate()?;
    let pts = t.points();
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = pts.len();
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;

    let mut stack = vec![(0usize, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let mut worst = 0.0;
        let mut split = None;
        for k in lo + 1..hi {
            let d = sed(&pts[lo], &pts[k], &pts[hi])?;
            if d > worst {
                worst = d;
                split = Some(k);
            }
        }
        if let Some(k) = split {
            if worst > cfg.tolerance {
                keep[k] = true;
                stack.push((k, hi));
                stack.push((lo, k));
            }
        }
    }

    let points = pts
        .iter()
        .zip(&keep)
        .filter_map(|(p, &k)| k.then_some(*p))
        .collect();
    Ok(Sample::new(t.id(), points))
}
