//! Bandwidth-constrained variants: every window of `delta` seconds may
//! commit at most `bw` points across all trajectories.
//!
//! All four variants share one priority queue that is flushed at each
//! window boundary; flushed points become permanent and serve as fixed
//! neighbours for priorities computed in later windows.

mod engine;
mod imp;

use serde::{Deserialize, Serialize};

pub use engine::{bwc_dr, bwc_squish, bwc_sttrace, bwc_sttrace_imp, BwcCompressor, BwcVariant, WindowCommit};
pub use imp::{compute_priority_imp, imp_priority_in, HistoryBuffer, ImpSign};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Points that may be committed per window.
    pub bw: usize,
    /// Window duration in seconds.
    pub delta: f64,
    /// Start of window 0.
    pub start: f64,
}

impl WindowConfig {
    pub fn new(bw: usize, delta: f64, start: f64) -> Result<Self> {
        let cfg = Self { bw, delta, start };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bw < 1 {
            return Err(Error::Config("bw must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!("delta must be > 0, got {}", self.delta)));
        }
        if !self.start.is_finite() {
            return Err(Error::Config("window start must be finite".into()));
        }
        Ok(())
    }

    /// Index of the half-open window `[start + k*delta, start + (k+1)*delta)`
    /// holding `ts`.
    pub fn index_of(&self, ts: f64) -> Result<u64> {
        if ts < self.start {
            return Err(Error::OutOfRange {
                t: ts,
                first: self.start,
                last: f64::INFINITY,
            });
        }
        Ok(((ts - self.start) / self.delta).floor() as u64)
    }

    pub fn window_start(&self, k: u64) -> f64 {
        self.start + k as f64 * self.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpConfig {
    pub window: WindowConfig,
    /// Seconds between the instants at which reconstruction error is
    /// sampled.
    pub precision: f64,
    #[serde(default)]
    pub sign: ImpSign,
}

impl ImpConfig {
    pub fn new(window: WindowConfig, precision: f64) -> Result<Self> {
        let cfg = Self {
            window,
            precision,
            sign: ImpSign::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_sign(mut self, sign: ImpSign) -> Self {
        self.sign = sign;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        if !(self.precision > 0.0 && self.precision <= self.window.delta) {
            return Err(Error::Config(format!(
                "precision must be in (0, delta], got {}",
                self.precision
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_index_half_open() {
        let w = WindowConfig::new(3, 900.0, 0.0).unwrap();
        assert_eq!(w.index_of(0.0).unwrap(), 0);
        assert_eq!(w.index_of(899.999).unwrap(), 0);
        assert_eq!(w.index_of(900.0).unwrap(), 1);
        assert_eq!(w.index_of(2701.0).unwrap(), 3);
        assert!(w.index_of(-1.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(WindowConfig::new(0, 1.0, 0.0).is_err());
        assert!(WindowConfig::new(1, 0.0, 0.0).is_err());
        let w = WindowConfig::new(1, 10.0, 0.0).unwrap();
        assert!(ImpConfig::new(w, 0.0).is_err());
        assert!(ImpConfig::new(w, 11.0).is_err());
        assert!(ImpConfig::new(w, 10.0).is_ok());
    }
}
