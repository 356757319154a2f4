use serde::{Deserialize, Serialize};

use super::sed_priority;
use crate::error::{Error, Result};
use crate::geometry::sed;
use crate::pqueue::PriorityQueue;
use crate::step::{Eviction, NeighborUpdate, QueuedPoint, Step};
use crate::store::{NodeId, SampleStore};
use crate::types::{OrderGuard, Point, Samples};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StTraceConfig {
    /// Total number of points kept across all trajectories.
    pub capacity: usize,
}

impl StTraceConfig {
    pub fn new(capacity: usize) -> Result<Self> {
        let cfg = Self { capacity };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacity < 2 {
            return Err(Error::Config(format!(
                "sttrace buffer must be >= 2, got {}",
                self.capacity
            )));
        }
        Ok(())
    }
}

/// Streaming STTrace: one queue shared by every trajectory of the stream.
///
/// When the queue is full, an incoming point is rejected if the priority
/// the current last point would get, `SED(s[-2], s[-1], p)`, is strictly
/// below the queue minimum. After an eviction both sample neighbours get
/// a fresh SED against their new neighbours.
#[derive(Debug)]
pub struct StTrace {
    cfg: StTraceConfig,
    guard: OrderGuard,
    store: SampleStore,
    queue: PriorityQueue<NodeId>,
    rejected: usize,
}

impl StTrace {
    pub fn new(cfg: StTraceConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            guard: OrderGuard::default(),
            store: SampleStore::new(),
            queue: PriorityQueue::new(),
            rejected: 0,
        })
    }

    fn interesting(&self, p: &Point) -> bool {
        if self.queue.len() < self.cfg.capacity {
            return true;
        }
        let Some(last) = self.store.tail(p.id) else {
            return true;
        };
        let Some(before) = self.store.prev(last) else {
            return true;
        };
        let potential = sed(self.store.point(before), self.store.point(last), p)
            .expect("stream is time ordered");
        match self.queue.min_priority() {
            Some(min) => potential >= min,
            None => true,
        }
    }

    pub fn push(&mut self, p: Point) -> Result<Step> {
        self.guard.check(&p)?;
        if !self.interesting(&p) {
            self.rejected += 1;
            return Ok(Step::rejected());
        }
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
            let after = sed_priority(&self.store, nb);
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

    pub fn rejected(&self) -> usize {
        self.rejected
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

    pub fn samples(&self) -> Samples {
        self.store.samples()
    }

    pub fn finish(self) -> Samples {
        self.store.samples()
    }
}

pub fn sttrace<'a, I>(stream: I, cfg: StTraceConfig) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    let mut st = StTrace::new(cfg)?;
    for p in stream {
        st.push(*p)?;
    }
    Ok(st.finish())
}
