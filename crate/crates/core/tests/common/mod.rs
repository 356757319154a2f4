//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use bwtraj_core::ingest::{synth, MotionModel, SynthSpec};
use bwtraj_core::types::{Point, Samples, Trajectories, Trajectory};
use bwtraj_core::{accuracy, Algorithm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random-walk and square-wave trajectories, `period` seconds apart.
pub fn mixed(seed: u64, trajectories: usize, duration: f64, period: f64) -> Trajectories {
    let spec = SynthSpec::new(trajectories, duration, period, MotionModel::Mixed { leg: 12.0 * period });
    synth(seed, &spec).unwrap()
}

pub fn constant_velocity(seed: u64, trajectories: usize, duration: f64, period: f64) -> Trajectories {
    synth(seed, &SynthSpec::new(trajectories, duration, period, MotionModel::ConstantVelocity)).unwrap()
}

/// Random walk on an integer grid with unit time steps, so that many
/// priorities tie.
pub fn grid_walk(rng: &mut ChaCha8Rng, id: u64, n: usize) -> Vec<Point> {
    let (mut x, mut y) = (0i32, 0i32);
    let mut t = rng.random_range(0..3) as f64;
    (0..n)
        .map(|_| {
            x += rng.random_range(-2..=2);
            y += rng.random_range(-2..=2);
            t += rng.random_range(1..=3) as f64;
            Point::new(id, t, x as f64, y as f64)
        })
        .collect()
}

pub fn random_trajectory(rng: &mut ChaCha8Rng, id: u64, n: usize) -> Trajectory {
    let mut t = rng.random_range(0.0..5.0);
    let (mut x, mut y) = (0.0, 0.0);
    let pts = (0..n)
        .map(|_| {
            t += rng.random_range(0.5..10.0);
            x += rng.random_range(-20.0..20.0);
            y += rng.random_range(-20.0..20.0);
            Point::new(id, t, x, y)
        })
        .collect();
    Trajectory::new(id, pts).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lerp_oracle(a: &Point, b: &Point, t: f64) -> (f64, f64) {
    let f = (t - a.ts) / (b.ts - a.ts);
    (a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))
}

fn d(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

pub fn sed_oracle(a: &Point, x: &Point, b: &Point) -> f64 {
    d((x.x, x.y), lerp_oracle(a, b, x.ts))
}

/// Position on the polyline `pts` at `t` by linear scan.
pub fn interp_oracle(pts: &[Point], t: f64) -> (f64, f64) {
    for w in pts.windows(2) {
        if w[0].ts <= t && t <= w[1].ts {
            if t == w[0].ts {
                return (w[0].x, w[0].y);
            }
            if t == w[1].ts {
                return (w[1].x, w[1].y);
            }
            return lerp_oracle(&w[0], &w[1], t);
        }
    }
    match pts {
        [p] if p.ts == t => (p.x, p.y),
        _ => panic!("{t} outside polyline"),
    }
}

/// Sum over `prev.ts + k*eps < next.ts`, `k >= 1`, of the extra distance
/// to the raw trajectory when `cur` is left out of the sample.
pub fn imp_oracle(prev: &Point, cur: &Point, next: &Point, raw: &[Point], eps: f64) -> f64 {
    let with = [*prev, *cur, *next];
    let without = [*prev, *next];
    let mut sum = 0.0;
    let mut k = 1u64;
    loop {
        let t = prev.ts + k as f64 * eps;
        if t >= next.ts {
            break;
        }
        let actual = interp_oracle(raw, t);
        sum += d(actual, interp_oracle(&without, t)) - d(actual, interp_oracle(&with, t));
        k += 1;
    }
    sum
}

/// Weighted mean error over the samples that have at least two points.
pub fn mean_error(originals: &Trajectories, samples: &Samples, interval: f64) -> f64 {
    let scored: Samples = samples
        .iter()
        .filter(|(_, s)| s.len() >= 2)
        .map(|(id, s)| (*id, s.clone()))
        .collect();
    accuracy(originals, &scored, interval).unwrap().weighted_mean
}

pub fn run(alg: &Algorithm, data: &Trajectories) -> Samples {
    alg.run(data).unwrap()
}

pub fn kept(samples: &Samples) -> usize {
    samples.values().map(|s| s.len()).sum()
}
