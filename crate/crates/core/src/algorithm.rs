//! Uniform entry point over every compressor, plus parameter derivation
//! from a target compression ratio.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bwc::{self, ImpConfig, ImpSign, WindowConfig};
use crate::classic::{self, DrConfig, Predictor, SquishConfig, StTraceConfig, TdTrConfig};
use crate::error::{Error, Result};
use crate::ingest::merge_stream;
use crate::types::{Samples, Trajectories};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    Squish,
    #[serde(rename = "sttrace")]
    StTrace,
    Dr,
    #[serde(rename = "tdtr")]
    TdTr,
    BwcSquish,
    #[serde(rename = "bwc-sttrace")]
    BwcStTrace,
    #[serde(rename = "bwc-sttrace-imp")]
    BwcStTraceImp,
    BwcDr,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 8] = [
        AlgorithmKind::TdTr,
        AlgorithmKind::Squish,
        AlgorithmKind::StTrace,
        AlgorithmKind::Dr,
        AlgorithmKind::BwcSquish,
        AlgorithmKind::BwcStTrace,
        AlgorithmKind::BwcStTraceImp,
        AlgorithmKind::BwcDr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Squish => "squish",
            AlgorithmKind::StTrace => "sttrace",
            AlgorithmKind::Dr => "dr",
            AlgorithmKind::TdTr => "tdtr",
            AlgorithmKind::BwcSquish => "bwc-squish",
            AlgorithmKind::BwcStTrace => "bwc-sttrace",
            AlgorithmKind::BwcStTraceImp => "bwc-sttrace-imp",
            AlgorithmKind::BwcDr => "bwc-dr",
        }
    }

    pub fn is_bwc(self) -> bool {
        matches!(
            self,
            AlgorithmKind::BwcSquish
                | AlgorithmKind::BwcStTrace
                | AlgorithmKind::BwcStTraceImp
                | AlgorithmKind::BwcDr
        )
    }

    /// Parses a comma-separated list; `all` expands to every algorithm.
    pub fn parse_list(s: &str) -> Result<Vec<AlgorithmKind>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Self::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Config("no algorithms given".into()));
        }
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

/// Squish buffer size: one fixed value, or a fraction of each trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquishCapacity {
    Fixed(usize),
    /// `ceil(ratio * |t|)` per trajectory, at least 2.
    Ratio(f64),
}

impl SquishCapacity {
    pub fn for_len(self, n: usize) -> usize {
        match self {
            SquishCapacity::Fixed(m) => m,
            SquishCapacity::Ratio(r) => ((r * n as f64).ceil() as usize).max(2),
        }
    }
}

/// A fully configured compressor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "algorithm")]
pub enum Algorithm {
    Squish { capacity: SquishCapacity },
    #[serde(rename = "sttrace")]
    StTrace(StTraceConfig),
    Dr(DrConfig),
    #[serde(rename = "tdtr")]
    TdTr(TdTrConfig),
    BwcSquish(WindowConfig),
    #[serde(rename = "bwc-sttrace")]
    BwcStTrace(WindowConfig),
    #[serde(rename = "bwc-sttrace-imp")]
    BwcStTraceImp(ImpConfig),
    BwcDr {
        window: WindowConfig,
        predictor: Predictor,
    },
}

impl Algorithm {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            Algorithm::Squish { .. } => AlgorithmKind::Squish,
            Algorithm::StTrace(_) => AlgorithmKind::StTrace,
            Algorithm::Dr(_) => AlgorithmKind::Dr,
            Algorithm::TdTr(_) => AlgorithmKind::TdTr,
            Algorithm::BwcSquish(_) => AlgorithmKind::BwcSquish,
            Algorithm::BwcStTrace(_) => AlgorithmKind::BwcStTrace,
            Algorithm::BwcStTraceImp(_) => AlgorithmKind::BwcStTraceImp,
            Algorithm::BwcDr { .. } => AlgorithmKind::BwcDr,
        }
    }

    pub fn window(&self) -> Option<WindowConfig> {
        match self {
            Algorithm::BwcSquish(w) | Algorithm::BwcStTrace(w) | Algorithm::BwcDr { window: w, .. } => {
                Some(*w)
            }
            Algorithm::BwcStTraceImp(c) => Some(c.window),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Algorithm::Squish { capacity } => match *capacity {
                SquishCapacity::Fixed(m) => SquishConfig { capacity: m }.validate(),
                SquishCapacity::Ratio(r) if r > 0.0 && r <= 1.0 => Ok(()),
                SquishCapacity::Ratio(r) => Err(Error::Config(format!("ratio {r} outside (0, 1]"))),
            },
            Algorithm::StTrace(c) => c.validate(),
            Algorithm::Dr(c) => c.validate(),
            Algorithm::TdTr(c) => c.validate(),
            Algorithm::BwcSquish(w) | Algorithm::BwcStTrace(w) | Algorithm::BwcDr { window: w, .. } => {
                w.validate()
            }
            Algorithm::BwcStTraceImp(c) => c.validate(),
        }
    }

    /// Runs the compressor over `trajectories`. Per-trajectory algorithms
    /// see each trajectory on its own; streaming ones see the merged
    /// time-ordered stream.
    pub fn run(&self, trajectories: &Trajectories) -> Result<Samples> {
        self.validate()?;
        let stream = || merge_stream(trajectories.values());
        match self {
            Algorithm::Squish { capacity } => trajectories
                .iter()
                .map(|(&id, t)| {
                    let cfg = SquishConfig::new(capacity.for_len(t.len()))?;
                    Ok((id, classic::squish(t, cfg)?))
                })
                .collect(),
            Algorithm::TdTr(cfg) => trajectories
                .iter()
                .map(|(&id, t)| Ok((id, classic::tdtr(t, *cfg)?)))
                .collect(),
            Algorithm::StTrace(cfg) => classic::sttrace(&stream(), *cfg),
            Algorithm::Dr(cfg) => classic::dead_reckoning(&stream(), *cfg),
            Algorithm::BwcSquish(w) => bwc::bwc_squish(&stream(), *w),
            Algorithm::BwcStTrace(w) => bwc::bwc_sttrace(&stream(), *w),
            Algorithm::BwcStTraceImp(c) => bwc::bwc_sttrace_imp(&stream(), *c),
            Algorithm::BwcDr { window, predictor } => bwc::bwc_dr(&stream(), *window, *predictor),
        }
    }
}

/// Settings used to turn a target ratio into concrete parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPlan {
    /// Kept / original points, in `(0, 1]`.
    pub ratio: f64,
    pub delta: f64,
    /// Window origin; `None` uses the first timestamp of the data.
    pub start: Option<f64>,
    pub predictor: Predictor,
    /// Imp sampling step; `None` uses `min(default_interval, delta)`.
    pub precision: Option<f64>,
    pub sign: ImpSign,
}

impl RatioPlan {
    pub fn new(ratio: f64, delta: f64) -> Self {
        Self {
            ratio,
            delta,
            start: None,
            predictor: Predictor::TwoPoint,
            precision: None,
            sign: ImpSign::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(Error::Config(format!("ratio {} outside (0, 1]", self.ratio)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config("delta must be > 0".into()));
        }
        Ok(())
    }

    /// Window settings for the BWC variants: `bw = round(ratio * N * delta /
    /// duration)`, at least 1.
    pub fn window_for(&self, trajectories: &Trajectories) -> Result<WindowConfig> {
        self.validate()?;
        let (first, last) = time_span(trajectories).ok_or(Error::EmptyInput)?;
        let total = point_count(trajectories) as f64;
        let duration = last - first;
        let per_window = if duration > 0.0 {
            self.ratio * total * self.delta / duration
        } else {
            self.ratio * total
        };
        WindowConfig::new(
            (per_window.round() as usize).max(1),
            self.delta,
            self.start.unwrap_or(first),
        )
    }

    /// Concrete configuration of `kind` aiming at `self.ratio`. Threshold
    /// algorithms (DR, TD-TR) are calibrated by bisection on the data.
    pub fn derive(&self, kind: AlgorithmKind, trajectories: &Trajectories) -> Result<Algorithm> {
        self.validate()?;
        let total = point_count(trajectories);
        if total == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(match kind {
            AlgorithmKind::Squish => Algorithm::Squish {
                capacity: SquishCapacity::Ratio(self.ratio),
            },
            AlgorithmKind::StTrace => Algorithm::StTrace(StTraceConfig::new(
                ((self.ratio * total as f64).ceil() as usize).max(2),
            )?),
            AlgorithmKind::Dr => {
                let predictor = self.predictor;
                let eps = calibrate(trajectories, self.ratio, |e| {
                    Algorithm::Dr(DrConfig {
                        epsilon: e,
                        predictor,
                    })
                })?;
                Algorithm::Dr(DrConfig::new(eps, predictor)?)
            }
            AlgorithmKind::TdTr => {
                let tol = calibrate(trajectories, self.ratio, |e| {
                    Algorithm::TdTr(TdTrConfig { tolerance: e })
                })?;
                Algorithm::TdTr(TdTrConfig::new(tol)?)
            }
            AlgorithmKind::BwcSquish => Algorithm::BwcSquish(self.window_for(trajectories)?),
            AlgorithmKind::BwcStTrace => Algorithm::BwcStTrace(self.window_for(trajectories)?),
            AlgorithmKind::BwcStTraceImp => {
                let window = self.window_for(trajectories)?;
                let precision = match self.precision {
                    Some(p) => p,
                    None => crate::eval::default_interval(trajectories)
                        .unwrap_or(self.delta)
                        .min(self.delta),
                };
                Algorithm::BwcStTraceImp(ImpConfig::new(window, precision)?.with_sign(self.sign))
            }
            AlgorithmKind::BwcDr => Algorithm::BwcDr {
                window: self.window_for(trajectories)?,
                predictor: self.predictor,
            },
        })
    }
}

pub fn point_count(trajectories: &Trajectories) -> usize {
    trajectories.values().map(|t| t.len()).sum()
}

/// Earliest and latest timestamp over all trajectories.
pub fn time_span(trajectories: &Trajectories) -> Option<(f64, f64)> {
    trajectories
        .values()
        .filter_map(|t| Some((t.points().first()?.ts, t.points().last()?.ts)))
        .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
}

fn kept(samples: &Samples) -> usize {
    samples.values().map(|s| s.len()).sum()
}

const CALIBRATION_STEPS: usize = 40;

/// Smallest threshold found whose run keeps at most `ratio` of the points.
/// Kept counts shrink (not always strictly) as the threshold grows.
fn calibrate<F>(trajectories: &Trajectories, ratio: f64, make: F) -> Result<f64>
where
    F: Fn(f64) -> Algorithm,
{
    let total = point_count(trajectories) as f64;
    let achieved = |e: f64| -> Result<f64> { Ok(kept(&make(e).run(trajectories)?) as f64 / total) };
    let mut lo = 1e-6;
    if achieved(lo)? <= ratio {
        return Ok(lo);
    }
    let mut hi = 1.0;
    while achieved(hi)? > ratio {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            // the floor (first points, endpoints) exceeds the target
            return Ok(hi);
        }
    }
    for _ in 0..CALIBRATION_STEPS {
        let mid = 0.5 * (lo + hi);
        if achieved(mid)? > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
