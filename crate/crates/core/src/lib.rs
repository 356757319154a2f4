//! Trajectory simplification for streams of moving-object positions,
//! including variants that cap the number of points kept per time window.
//!
//! Positions are planar meters and timestamps are seconds. Geographic
//! datasets are projected on load (see [`ingest`]).

// `!(a < b)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithm;
pub mod bwc;
pub mod classic;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod ingest;
pub mod pqueue;
pub mod step;
mod store;
pub mod types;

pub use algorithm::{Algorithm, AlgorithmKind, RatioPlan, SquishCapacity};
pub use bwc::{BwcCompressor, BwcVariant, ImpConfig, ImpSign, WindowConfig};
pub use classic::{DrConfig, Predictor, SquishConfig, StTraceConfig, TdTrConfig};
pub use error::{Error, ErrorClass, Result};
pub use eval::{accuracy, compare, window_histogram, AccuracyReport, CompareOptions, CompareReport, WindowHistogram};
pub use types::{Point, Position, Sample, Samples, Stream, Trajectories, Trajectory, TrajectoryId};
