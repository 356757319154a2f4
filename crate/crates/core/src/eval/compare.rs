use std::fmt;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{accuracy, default_interval, window_histogram};
use crate::algorithm::{point_count, Algorithm};
use crate::bwc::WindowConfig;
use crate::error::{Error, Result};
use crate::types::{Samples, Trajectories};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareOptions {
    /// Accuracy sampling step; `None` picks the default interval.
    pub interval: Option<f64>,
    /// Windows used to bin the output of non-bandwidth algorithms. BWC
    /// rows are binned with their own windows.
    pub window: WindowConfig,
    /// Record wall-clock time per row. Off by default so that reports are
    /// reproducible byte for byte.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub algorithm: String,
    pub ratio: f64,
    pub interval: f64,
    /// `None` when no sample had two points to evaluate.
    pub mean_error: Option<f64>,
    pub max_window_count: usize,
    pub bw: Option<usize>,
    pub delta: f64,
    pub wall_ms: Option<f64>,
    /// Trajectories left out of the error: no sample, or a single point.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

impl CompareReport {
    /// CSV with header
    /// `algorithm,ratio,interval_s,mean_error_m,max_window_count,bw,delta_s,wall_ms`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "algorithm",
            "ratio",
            "interval_s",
            "mean_error_m",
            "max_window_count",
            "bw",
            "delta_s",
            "wall_ms",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.algorithm.clone(),
                r.ratio.to_string(),
                r.interval.to_string(),
                opt(r.mean_error),
                r.max_window_count.to_string(),
                r.bw.map_or_else(String::new, |b| b.to_string()),
                r.delta.to_string(),
                opt(r.wall_ms),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn row(&self, algorithm: &str) -> Option<&CompareRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<16} {:>8} {:>12} {:>10} {:>6} {:>9} {:>8}",
            "algorithm", "ratio", "error (m)", "max/win", "bw", "wall ms", "skipped"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<16} {:>8.4} {:>12} {:>10} {:>6} {:>9} {:>8}",
                r.algorithm,
                r.ratio,
                r.mean_error.map_or_else(|| "NA".into(), |e| format!("{e:.3}")),
                r.max_window_count,
                r.bw.map_or_else(|| "-".into(), |b| b.to_string()),
                r.wall_ms.map_or_else(|| "-".into(), |w| format!("{w:.1}")),
                r.skipped,
            )?;
        }
        Ok(())
    }
}

/// Drops samples that cannot be evaluated (fewer than two points).
fn evaluable(samples: &Samples) -> Samples {
    samples
        .iter()
        .filter(|(_, s)| s.len() >= 2)
        .map(|(id, s)| (*id, s.clone()))
        .collect()
}

fn row(trajectories: &Trajectories, alg: &Algorithm, opts: &CompareOptions, interval: f64) -> Result<CompareRow> {
    let started = Instant::now();
    let samples = alg.run(trajectories)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let window = alg.window().unwrap_or(opts.window);
    let hist = window_histogram(&samples, &window, None);
    let kept: usize = samples.values().map(|s| s.len()).sum();
    let scored = evaluable(&samples);
    let mean_error = if scored.is_empty() {
        None
    } else {
        Some(accuracy(trajectories, &scored, interval)?.weighted_mean)
    };
    Ok(CompareRow {
        algorithm: alg.kind().name().to_string(),
        ratio: kept as f64 / point_count(trajectories) as f64,
        interval,
        mean_error,
        max_window_count: hist.max(),
        bw: alg.window().map(|w| w.bw),
        delta: window.delta,
        wall_ms: opts.timing.then_some(wall_ms),
        skipped: trajectories.len() - scored.len(),
    })
}

/// Runs every algorithm on the same trajectories and tabulates ratio,
/// error and the busiest window. Rows keep the order of `algorithms`.
pub fn compare(trajectories: &Trajectories, algorithms: &[Algorithm], opts: &CompareOptions) -> Result<CompareReport> {
    if point_count(trajectories) == 0 {
        return Err(Error::EmptyInput);
    }
    opts.window.validate()?;
    let interval = match opts.interval {
        Some(i) => i,
        None => default_interval(trajectories).ok_or(Error::EmptyInput)?,
    };
    let rows = algorithms
        .par_iter()
        .map(|alg| row(trajectories, alg, opts, interval))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompareReport { rows })
}
