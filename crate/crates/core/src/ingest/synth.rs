//! Seeded synthetic trajectories for deterministic experiments.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Point, Trajectories, Trajectory, TrajectoryId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum MotionModel {
    ConstantVelocity,
    /// Correlated random walk: heading drifts, speed jitters.
    RandomWalk,
    /// Piecewise-straight path turning +-90 degrees every `leg` seconds.
    SquareWave { leg: f64 },
    /// Straight cruising sampled every `period`, plus a manoeuvring burst
    /// `[start, start + length)` sampled every `burst_period`.
    Burst {
        start: f64,
        length: f64,
        burst_period: f64,
    },
    /// Half random-walk, half square-wave trajectories.
    Mixed { leg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub trajectories: usize,
    /// Seconds.
    pub duration: f64,
    /// Mean seconds between measurements.
    pub period: f64,
    /// Uniform timestamp jitter as a fraction of `period`, in `[0, 0.5)`.
    pub jitter: f64,
    /// Mean speed in m/s.
    pub speed: f64,
    pub model: MotionModel,
}

impl SynthSpec {
    pub fn new(trajectories: usize, duration: f64, period: f64, model: MotionModel) -> Self {
        Self {
            trajectories,
            duration,
            period,
            jitter: 0.3,
            speed: 5.0,
            model,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if self.trajectories == 0 || !positive(self.duration) || !positive(self.period) || !positive(self.speed) {
            return Err(Error::Config(
                "synth needs trajectories, duration, period and speed > 0".into(),
            ));
        }
        if !(0.0..0.5).contains(&self.jitter) {
            return Err(Error::Config("jitter must be in [0, 0.5)".into()));
        }
        match self.model {
            MotionModel::SquareWave { leg } | MotionModel::Mixed { leg } if !positive(leg) => {
                Err(Error::Config("square-wave leg must be > 0".into()))
            }
            MotionModel::Burst {
                length,
                burst_period,
                ..
            } if !positive(length) || !positive(burst_period) => {
                Err(Error::Config("burst length and period must be > 0".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Burst test fixture: 50 trajectories, 4 hours, one 5-minute burst
/// inside the 900 s window starting at 3600 s. About 10k points.
pub fn burst_fixture() -> SynthSpec {
    SynthSpec::new(
        50,
        14_400.0,
        400.0,
        MotionModel::Burst {
            start: 3_600.0,
            length: 300.0,
            burst_period: 1.8,
        },
    )
}

/// Sampling instants on `[0, duration]` spaced `period` apart with
/// uniform jitter, strictly increasing.
fn timestamps(rng: &mut ChaCha8Rng, spec: &SynthSpec) -> Vec<f64> {
    let offset = rng.random_range(0.0..spec.period);
    let mut out = Vec::new();
    let mut k = 0.0;
    loop {
        let base = offset + k * spec.period;
        if base > spec.duration {
            break;
        }
        let j = if spec.jitter > 0.0 {
            rng.random_range(-spec.jitter..spec.jitter) * spec.period
        } else {
            0.0
        };
        out.push((base + j).clamp(0.0, spec.duration));
        k += 1.0;
    }
    out.dedup_by(|b, a| *b <= *a);
    out
}

fn burst_timestamps(
    rng: &mut ChaCha8Rng,
    spec: &SynthSpec,
    start: f64,
    length: f64,
    burst_period: f64,
) -> Vec<f64> {
    let outside = timestamps(rng, spec)
        .into_iter()
        .filter(|t| *t < start || *t >= start + length);
    let phase = rng.random_range(0.0..burst_period);
    let n = ((length - phase) / burst_period).ceil().max(0.0) as usize;
    let inside = (0..n)
        .map(|i| start + phase + i as f64 * burst_period)
        .filter(|t| *t < start + length);
    let mut all: Vec<f64> = outside.chain(inside).collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|b, a| *b <= *a);
    all
}

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

struct Walker {
    x: f64,
    y: f64,
    heading: f64,
    speed: f64,
    t: f64,
}

impl Walker {
    fn point(&self, id: TrajectoryId) -> Point {
        Point::new(id, self.t, self.x, self.y).with_motion(self.speed, wrap_angle(self.heading))
    }

    fn advance(&mut self, dt: f64) {
        self.x += self.heading.cos() * self.speed * dt;
        self.y += self.heading.sin() * self.speed * dt;
        self.t += dt;
    }
}

fn constant_velocity(id: TrajectoryId, rng: &mut ChaCha8Rng, spec: &SynthSpec) -> Vec<Point> {
    let mut w = start_walker(rng, spec);
    timestamps(rng, spec)
        .into_iter()
        .map(|t| {
            let dt = t - w.t;
            w.advance(dt);
            w.point(id)
        })
        .collect()
}

fn start_walker(rng: &mut ChaCha8Rng, spec: &SynthSpec) -> Walker {
    Walker {
        x: rng.random_range(-5_000.0..5_000.0),
        y: rng.random_range(-5_000.0..5_000.0),
        heading: rng.random_range(0.0..TAU),
        speed: spec.speed * rng.random_range(0.5..1.5),
        t: 0.0,
    }
}

/// Heading diffuses with `turn` radians per sqrt-second between samples.
fn random_walk_over(
    id: TrajectoryId,
    rng: &mut ChaCha8Rng,
    w: &mut Walker,
    times: &[f64],
    turn: f64,
    base_speed: f64,
) -> Vec<Point> {
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    times
        .iter()
        .map(|&t| {
            let dt = t - w.t;
            w.advance(dt);
            w.heading += turn * dt.sqrt() * unit.sample(rng);
            w.speed = (w.speed + 0.1 * base_speed * unit.sample(rng)).clamp(0.2 * base_speed, 2.0 * base_speed);
            w.point(id)
        })
        .collect()
}

fn random_walk(id: TrajectoryId, rng: &mut ChaCha8Rng, spec: &SynthSpec) -> Vec<Point> {
    let mut w = start_walker(rng, spec);
    let times = timestamps(rng, spec);
    let base = w.speed;
    random_walk_over(id, rng, &mut w, &times, 0.05, base)
}

fn square_wave(id: TrajectoryId, rng: &mut ChaCha8Rng, spec: &SynthSpec, leg: f64) -> Vec<Point> {
    let w = start_walker(rng, spec);
    let axis = w.heading;
    let phase = rng.random_range(0.0..2.0 * leg);
    // legs alternate: along axis, +90, along axis, -90
    let headings = [axis, axis + FRAC_PI_2, axis, axis - FRAC_PI_2];
    let (mut x, mut y) = (w.x, w.y);
    let mut t_prev = 0.0;
    timestamps(rng, spec)
        .into_iter()
        .map(|t| {
            // integrate piecewise across leg boundaries
            let mut cur = t_prev;
            while cur < t {
                let leg_idx = ((cur + phase) / leg).floor();
                let leg_end = (leg_idx + 1.0) * leg - phase;
                let step_end = leg_end.min(t);
                let h = headings[(leg_idx as usize) % 4];
                x += h.cos() * w.speed * (step_end - cur);
                y += h.sin() * w.speed * (step_end - cur);
                cur = step_end;
            }
            t_prev = t;
            let h = headings[(((t + phase) / leg).floor() as usize) % 4];
            Point::new(id, t, x, y).with_motion(w.speed, wrap_angle(h))
        })
        .collect()
}

fn burst(
    id: TrajectoryId,
    rng: &mut ChaCha8Rng,
    spec: &SynthSpec,
    start: f64,
    length: f64,
    burst_period: f64,
) -> Vec<Point> {
    let times = burst_timestamps(rng, spec, start, length, burst_period);
    let mut w = start_walker(rng, spec);
    let base = w.speed;
    let cruise_heading = w.heading;
    let mut out = Vec::with_capacity(times.len());
    let (before, rest): (Vec<f64>, Vec<f64>) = times.iter().partition(|t| **t < start);
    let (during, after): (Vec<f64>, Vec<f64>) = rest.iter().partition(|t| **t < start + length);

    for t in before {
        w.advance(t - w.t);
        out.push(w.point(id));
    }
    w.advance(start - w.t);
    out.extend(random_walk_over(id, rng, &mut w, &during, 0.35, base));
    // resume straight cruising from wherever the manoeuvre ended
    w.advance(start + length - w.t);
    w.heading = cruise_heading + rng.random_range(-PI / 4.0..PI / 4.0);
    w.speed = base;
    for t in after {
        w.advance(t - w.t);
        out.push(w.point(id));
    }
    out
}

/// Generates `spec.trajectories` trajectories with ids `0..n`. Identical
/// seed and spec give identical output.
pub fn synth(seed: u64, spec: &SynthSpec) -> Result<Trajectories> {
    spec.validate()?;
    let mut out = BTreeMap::new();
    for i in 0..spec.trajectories {
        let id = i as TrajectoryId;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id);
        let pts = match spec.model {
            MotionModel::ConstantVelocity => constant_velocity(id, &mut rng, spec),
            MotionModel::RandomWalk => random_walk(id, &mut rng, spec),
            MotionModel::SquareWave { leg } => square_wave(id, &mut rng, spec, leg),
            MotionModel::Burst {
                start,
                length,
                burst_period,
            } => burst(id, &mut rng, spec, start, length, burst_period),
            MotionModel::Mixed { leg } => {
                if i % 2 == 0 {
                    random_walk(id, &mut rng, spec)
                } else {
                    square_wave(id, &mut rng, spec, leg)
                }
            }
        };
        out.insert(id, Trajectory::new(id, pts)?);
    }
    Ok(out)
}
