//! Accuracy of simplified trajectories, per-window point counts, and
//! side-by-side comparison of algorithms.

mod accuracy;
mod compare;
mod histogram;

pub use accuracy::{accuracy, default_interval, AccuracyReport, TrajectoryAccuracy};
pub use compare::{compare, CompareOptions, CompareReport, CompareRow};
pub use histogram::{window_histogram, WindowHistogram};
