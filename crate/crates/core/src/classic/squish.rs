use serde::{Deserialize, Serialize};

use super::sed_priority;
use crate::error::{Error, Result};
use crate::pqueue::PriorityQueue;
use crate::step::{Eviction, NeighborUpdate, QueuedPoint, Step};
use crate::store::{NodeId, SampleStore};
use crate::types::{OrderGuard, Point, Sample, Trajectory, TrajectoryId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquishConfig {
    /// Maximum number of points kept for the trajectory.
    pub capacity: usize,
}

impl SquishConfig {
    pub fn new(capacity: usize) -> Result<Self> {
        let cfg = Self { capacity };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacity < 2 {
            return Err(Error::Config(format!(
                "squish capacity must be >= 2, got {}",
                self.capacity
            )));
        }
        Ok(())
    }
}

/// Streaming Squish over a single trajectory.
///
/// Priorities start as the SED against the sample neighbours; an eviction
/// adds the evicted priority onto both neighbours instead of recomputing
/// them.
#[derive(Debug)]
pub struct Squish {
    cfg: SquishConfig,
    id: Option<TrajectoryId>,
    guard: OrderGuard,
    store: SampleStore,
    queue: PriorityQueue<NodeId>,
}

impl Squish {
    pub fn new(cfg: SquishConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            id: None,
            guard: OrderGuard::default(),
            store: SampleStore::new(),
            queue: PriorityQueue::new(),
        })
    }

    pub fn push(&mut self, p: Point) -> Result<Step> {
        match self.id {
            Some(id) if id != p.id => {
                return Err(Error::Integrity(format!(
                    "squish compresses one trajectory ({id}), got point of {}",
                    p.id
                )))
            }
            _ => self.id = Some(p.id),
        }
        self.guard.check(&p)?;

        let n = self.store.append(p);
        if let Some(prev) = self.store.prev(n) {
            let pr = sed_priority(&self.store, prev);
            self.queue.update_priority(&prev, pr)?;
        }
        self.queue.add(n, f64::INFINITY)?;

        let eviction = if self.queue.len() > self.cfg.capacity {
            Some(self.evict()?)
        } else {
            None
        };
        Ok(Step::accepted(eviction))
    }

    fn evict(&mut self) -> Result<Eviction> {
        let e = self.queue.pop_min()?;
        let point = *self.store.point(e.key);
        let (prev, next) = self.store.remove(e.key);
        let mut neighbors = Vec::with_capacity(2);
        for nb in [prev, next].into_iter().flatten() {
            let before = self.queue.priority(&nb).ok_or(Error::MissingEntry)?;
            let after = before + e.priority;
            self.queue.update_priority(&nb, after)?;
            neighbors.push(NeighborUpdate {
                point: *self.store.point(nb),
                before,
                after,
            });
        }
        Ok(Eviction {
            point,
            priority: e.priority,
            neighbors,
        })
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn queued(&self) -> Vec<QueuedPoint> {
        self.queue
            .iter()
            .map(|e| QueuedPoint {
                point: *self.store.point(e.key),
                priority: e.priority,
                seq: e.seq,
            })
            .collect()
    }

    pub fn sample(&self) -> Sample {
        match self.id {
            Some(id) => Sample::new(id, self.store.points_of(id)),
            None => Sample::default(),
        }
    }

    pub fn finish(self) -> Sample {
        self.sample()
    }
}

/// Compresses `t` to at most `cfg.capacity` points.
pub fn squish(t: &Trajectory, cfg: SquishConfig) -> Result<Sample> {
    if t.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut s = Squish::new(cfg)?;
    for p in t.points() {
        s.push(*p)?;
    }
    Ok(s.finish())
}
