use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dist, interpolate_at};
use crate::types::{Sample, Samples, Trajectories, Trajectory, TrajectoryId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryAccuracy {
    pub id: TrajectoryId,
    /// Number of evaluation instants.
    pub instants: usize,
    /// Mean synchronized distance in meters.
    pub mean_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub per_trajectory: Vec<TrajectoryAccuracy>,
    /// Mean over all evaluation instants of all trajectories.
    pub weighted_mean: f64,
    /// Mean of the per-trajectory means.
    pub unweighted_mean: f64,
    pub interval: f64,
    /// Kept points over original points.
    pub ratio: f64,
    pub kept: usize,
    pub original: usize,
}

impl AccuracyReport {
    pub fn instants(&self) -> usize {
        self.per_trajectory.iter().map(|t| t.instants).sum()
    }

    /// CSV with header `scope,trajectory_id,eval_instants,mean_error_m`.
    /// Scope is `trajectory`, `dataset_weighted` or `dataset_unweighted`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["scope", "trajectory_id", "eval_instants", "mean_error_m"])?;
        for t in &self.per_trajectory {
            w.write_record([
                "trajectory".to_string(),
                t.id.to_string(),
                t.instants.to_string(),
                t.mean_error.to_string(),
            ])?;
        }
        let n = self.instants().to_string();
        w.write_record(["dataset_weighted", "", &n, &self.weighted_mean.to_string()])?;
        w.write_record(["dataset_unweighted", "", &n, &self.unweighted_mean.to_string()])?;
        w.flush()?;
        Ok(())
    }
}

/// Smallest per-trajectory median gap between consecutive raw points.
/// `None` when no trajectory has two points.
pub fn default_interval(originals: &Trajectories) -> Option<f64> {
    originals
        .values()
        .filter_map(|t| {
            let mut gaps: Vec<f64> = t.points().windows(2).map(|w| w[1].ts - w[0].ts).collect();
            if gaps.is_empty() {
                return None;
            }
            gaps.sort_by(f64::total_cmp);
            let m = gaps.len() / 2;
            Some(if gaps.len().is_multiple_of(2) {
                0.5 * (gaps[m - 1] + gaps[m])
            } else {
                gaps[m]
            })
        })
        .reduce(f64::min)
}

fn trajectory_accuracy(original: &Trajectory, sample: &Sample, interval: f64) -> Result<TrajectoryAccuracy> {
    let id = original.id();
    if !sample.is_subsequence_of(original.points()) {
        return Err(Error::Integrity(format!(
            "sample of trajectory {id} is not a subsequence of its original"
        )));
    }
    let pts = &sample.points;
    if pts.len() < 2 {
        return Err(Error::DegenerateSpan { id });
    }
    let (first, last) = (pts[0].ts, pts[pts.len() - 1].ts);
    let mut sum = 0.0;
    let mut n = 0usize;
    loop {
        let t = first + n as f64 * interval;
        if t > last {
            break;
        }
        let a = interpolate_at(original.points(), t)?;
        let b = interpolate_at(pts, t)?;
        sum += dist(a, b);
        n += 1;
    }
    Ok(TrajectoryAccuracy {
        id,
        instants: n,
        mean_error: sum / n as f64,
    })
}

/// Mean synchronized distance between each sample and its original,
/// evaluated every `interval` seconds across the sample's own time span.
pub fn accuracy(originals: &Trajectories, samples: &Samples, interval: f64) -> Result<AccuracyReport> {
    if !(interval > 0.0 && interval.is_finite()) {
        return Err(Error::Config(format!("interval must be > 0, got {interval}")));
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let pairs = samples
        .iter()
        .map(|(id, s)| {
            originals
                .get(id)
                .map(|o| (o, s))
                .ok_or_else(|| Error::Integrity(format!("sample for unknown trajectory {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let per_trajectory = pairs
        .par_iter()
        .map(|(o, s)| trajectory_accuracy(o, s, interval))
        .collect::<Result<Vec<_>>>()?;

    let instants: usize = per_trajectory.iter().map(|t| t.instants).sum();
    let weighted_mean = per_trajectory
        .iter()
        .map(|t| t.mean_error * t.instants as f64)
        .sum::<f64>()
        / instants as f64;
    let unweighted_mean =
        per_trajectory.iter().map(|t| t.mean_error).sum::<f64>() / per_trajectory.len() as f64;
    let kept = samples.values().map(|s| s.len()).sum();
    let original = originals.values().map(|t| t.len()).sum();
    Ok(AccuracyReport {
        per_trajectory,
        weighted_mean,
        unweighted_mean,
        interval,
        ratio: kept as f64 / original as f64,
        kept,
        original,
    })
}
