use std::io::Write;

use serde::Serialize;

use crate::bwc::WindowConfig;
use crate::error::Result;
use crate::types::Samples;

/// Kept points per window, summed over all samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowHistogram {
    pub delta: f64,
    pub start: f64,
    /// Cap the samples were produced under, for reference.
    pub bw: usize,
    pub counts: Vec<usize>,
    /// Points earlier than `start`, not binned.
    pub before_start: usize,
}

impl WindowHistogram {
    pub fn max(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Windows whose count is above the cap.
    pub fn violations(&self) -> usize {
        self.counts.iter().filter(|&&c| c > self.bw).count()
    }

    /// CSV with header `window_index,window_start_ts,count`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["window_index", "window_start_ts", "count"])?;
        for (k, c) in self.counts.iter().enumerate() {
            let ts = self.start + k as f64 * self.delta;
            w.write_record([k.to_string(), ts.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Bins every sample point into the windows of `cfg`. With `end` given
/// the histogram covers `[start, end]` even where windows are empty;
/// otherwise it stops at the last occupied window.
pub fn window_histogram(samples: &Samples, cfg: &WindowConfig, end: Option<f64>) -> WindowHistogram {
    let mut counts: Vec<usize> = Vec::new();
    let mut before_start = 0;
    if let Some(e) = end.filter(|e| *e >= cfg.start) {
        counts.resize(((e - cfg.start) / cfg.delta).floor() as usize + 1, 0);
    }
    for p in samples.values().flat_map(|s| s.points.iter()) {
        match cfg.index_of(p.ts) {
            Ok(k) => {
                let k = k as usize;
                if k >= counts.len() {
                    counts.resize(k + 1, 0);
                }
                counts[k] += 1;
            }
            Err(_) => before_start += 1,
        }
    }
    WindowHistogram {
        delta: cfg.delta,
        start: cfg.start,
        bw: cfg.bw,
        counts,
        before_start,
    }
}
