//! Fixtures shared by the benchmarks.

use bwtraj_core::ingest::{burst_fixture, synth, MotionModel, SynthSpec};
use bwtraj_core::{Algorithm, AlgorithmKind, RatioPlan, Trajectories};

/// Burst dataset used by the bandwidth experiments (about 10k points).
pub fn burst(seed: u64) -> Trajectories {
    synth(seed, &burst_fixture()).expect("fixture spec is valid")
}

/// Random-walk and square-wave trajectories, one point every 10 s.
pub fn mixed(seed: u64, trajectories: usize, duration: f64) -> Trajectories {
    let spec = SynthSpec::new(trajectories, duration, 10.0, MotionModel::Mixed { leg: 120.0 });
    synth(seed, &spec).expect("mixed spec is valid")
}

/// Every algorithm configured for `ratio` with 900 s windows.
pub fn configured(data: &Trajectories, ratio: f64) -> Vec<Algorithm> {
    let plan = RatioPlan::new(ratio, 900.0);
    AlgorithmKind::ALL
        .iter()
        .map(|k| plan.derive(*k, data).expect("ratio plan applies"))
        .collect()
}
