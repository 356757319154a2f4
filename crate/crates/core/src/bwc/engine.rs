use serde::{Deserialize, Serialize};

use super::imp::{compute_priority_imp, HistoryBuffer, ImpSign};
use super::{ImpConfig, WindowConfig};
use crate::classic::{estimate_position, sed_priority, Predictor};
use crate::error::{Error, Result};
use crate::geometry::dist;
use crate::pqueue::PriorityQueue;
use crate::step::{Eviction, NeighborUpdate, QueuedPoint, Step};
use crate::store::{NodeId, SampleStore};
use crate::types::{OrderGuard, Point, Samples, TrajectoryId};

/// How priorities are assigned and maintained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BwcVariant {
    /// SED at insertion, evicted priority added onto both neighbours.
    Squish,
    /// SED, recomputed exactly for both neighbours after an eviction.
    StTrace,
    /// Sampled reconstruction-error difference against the raw trajectory.
    StTraceImp { precision: f64, sign: ImpSign },
    /// Deviation from the dead-reckoning prediction; the one or two
    /// successors are recomputed after an eviction.
    DeadReckoning { predictor: Predictor },
}

/// Number of points committed when a window closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowCommit {
    pub window: u64,
    pub count: usize,
}

#[derive(Debug)]
pub struct BwcCompressor {
    cfg: WindowConfig,
    variant: BwcVariant,
    guard: OrderGuard,
    store: SampleStore,
    queue: PriorityQueue<NodeId>,
    history: HistoryBuffer,
    window: Option<u64>,
    commits: Vec<WindowCommit>,
}

impl BwcCompressor {
    pub fn new(cfg: WindowConfig, variant: BwcVariant) -> Result<Self> {
        cfg.validate()?;
        if let BwcVariant::StTraceImp { precision, .. } = variant {
            ImpConfig {
                window: cfg,
                precision,
                sign: ImpSign::default(),
            }
            .validate()?;
        }
        Ok(Self {
            cfg,
            variant,
            guard: OrderGuard::default(),
            store: SampleStore::new(),
            queue: PriorityQueue::new(),
            history: HistoryBuffer::new(),
            window: None,
            commits: Vec::new(),
        })
    }

    pub fn config(&self) -> WindowConfig {
        self.cfg
    }

    pub fn push(&mut self, p: Point) -> Result<Step> {
        self.guard.check(&p)?;
        let k = self.cfg.index_of(p.ts)?;
        match self.window {
            Some(w) if k > w => {
                self.close_window(w)?;
                self.open_window(k);
            }
            None => self.window = Some(k),
            _ => {}
        }

        if matches!(self.variant, BwcVariant::StTraceImp { .. }) {
            self.history.record(p);
        }

        let priority = match self.variant {
            BwcVariant::DeadReckoning { predictor } => {
                let last = self.store.tail(p.id);
                let before = last.and_then(|n| self.store.prev(n));
                self.dr_priority(&p, last, before, predictor)?
            }
            _ => f64::INFINITY,
        };

        let n = self.store.append(p);
        if let Some(prev) = self.store.prev(n) {
            if self.queue.contains(&prev) {
                let pr = self.neighbor_priority(prev)?;
                if let Some(pr) = pr {
                    self.queue.update_priority(&prev, pr)?;
                }
            }
        }
        self.queue.add(n, priority)?;

        let eviction = if self.queue.len() > self.cfg.bw {
            Some(self.evict()?)
        } else {
            None
        };
        Ok(Step::accepted(eviction))
    }

    /// Priority of the previous tail once a point has been appended after
    /// it; `None` when the variant leaves it untouched.
    fn neighbor_priority(&self, n: NodeId) -> Result<Option<f64>> {
        Ok(match self.variant {
            BwcVariant::Squish | BwcVariant::StTrace => Some(sed_priority(&self.store, n)),
            BwcVariant::StTraceImp { precision, sign } => Some(self.imp_priority(n, precision, sign)?),
            BwcVariant::DeadReckoning { .. } => None,
        })
    }

    fn imp_priority(&self, n: NodeId, precision: f64, sign: ImpSign) -> Result<f64> {
        match (self.store.prev(n), self.store.next(n)) {
            (Some(a), Some(b)) => {
                let cur = self.store.point(n);
                compute_priority_imp(
                    self.store.point(a),
                    cur,
                    self.store.point(b),
                    self.history.get(cur.id),
                    precision,
                    sign,
                )
            }
            _ => Ok(f64::INFINITY),
        }
    }

    fn dr_priority(
        &self,
        p: &Point,
        last: Option<NodeId>,
        before: Option<NodeId>,
        predictor: Predictor,
    ) -> Result<f64> {
        let est = estimate_position(
            last.map(|n| self.store.point(n)),
            before.map(|n| self.store.point(n)),
            p.ts,
            predictor,
        )?;
        Ok(est.map_or(f64::INFINITY, |e| dist(e, p.pos())))
    }

    fn dr_priority_of(&self, n: NodeId, predictor: Predictor) -> Result<f64> {
        let last = self.store.prev(n);
        let before = last.and_then(|m| self.store.prev(m));
        self.dr_priority(self.store.point(n), last, before, predictor)
    }

    fn evict(&mut self) -> Result<Eviction> {
        let e = self.queue.pop_min()?;
        let point = *self.store.point(e.key);
        let (prev, next) = self.store.remove(e.key);

        let targets: Vec<NodeId> = match self.variant {
            BwcVariant::DeadReckoning { .. } => {
                let second = next.and_then(|n| self.store.next(n));
                [next, second].into_iter().flatten().collect()
            }
            _ => [prev, next].into_iter().flatten().collect(),
        };

        let mut neighbors = Vec::with_capacity(2);
        for nb in targets {
            // committed neighbours are immutable
            let Some(before) = self.queue.priority(&nb) else {
                continue;
            };
            let after = match self.variant {
                BwcVariant::Squish => before + e.priority,
                BwcVariant::StTrace => sed_priority(&self.store, nb),
                BwcVariant::StTraceImp { precision, sign } => self.imp_priority(nb, precision, sign)?,
                BwcVariant::DeadReckoning { predictor } => self.dr_priority_of(nb, predictor)?,
            };
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

    fn close_window(&mut self, w: u64) -> Result<()> {
        let committed = self.queue.flush();
        if committed.len() > self.cfg.bw {
            return Err(Error::Invariant(format!(
                "window {w} commits {} points, cap is {}",
                committed.len(),
                self.cfg.bw
            )));
        }
        self.commits.push(WindowCommit {
            window: w,
            count: committed.len(),
        });
        Ok(())
    }

    fn open_window(&mut self, k: u64) {
        self.window = Some(k);
        if !matches!(self.variant, BwcVariant::StTraceImp { .. }) {
            return;
        }
        // Queued points of the new window only ever reach back to the last
        // committed point of their trajectory.
        let horizon = self.cfg.window_start(k) - self.cfg.delta;
        for id in self.history.ids() {
            let anchor = self.store.tail(id).map(|n| self.store.point(n).ts);
            let cut = anchor.map_or(horizon, |a| a.min(horizon));
            self.history.prune(id, cut);
        }
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

    pub fn current_window(&self) -> Option<u64> {
        self.window
    }

    /// Counts of windows closed so far.
    pub fn commits(&self) -> &[WindowCommit] {
        &self.commits
    }

    pub fn history(&self) -> &HistoryBuffer {
        &self.history
    }

    pub fn sample_points(&self, id: TrajectoryId) -> Vec<Point> {
        self.store.points_of(id)
    }

    pub fn samples(&self) -> Samples {
        self.store.samples()
    }

    /// Commits the last window and returns the samples.
    pub fn finish(mut self) -> Result<Samples> {
        if let Some(w) = self.window {
            self.close_window(w)?;
        }
        Ok(self.store.samples())
    }
}

fn run<'a, I>(stream: I, cfg: WindowConfig, variant: BwcVariant) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    let mut c = BwcCompressor::new(cfg, variant)?;
    for p in stream {
        c.push(*p)?;
    }
    c.finish()
}

pub fn bwc_squish<'a, I>(stream: I, cfg: WindowConfig) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    run(stream, cfg, BwcVariant::Squish)
}

pub fn bwc_sttrace<'a, I>(stream: I, cfg: WindowConfig) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    run(stream, cfg, BwcVariant::StTrace)
}

pub fn bwc_sttrace_imp<'a, I>(stream: I, cfg: ImpConfig) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    run(
        stream,
        cfg.window,
        BwcVariant::StTraceImp {
            precision: cfg.precision,
            sign: cfg.sign,
        },
    )
}

pub fn bwc_dr<'a, I>(stream: I, cfg: WindowConfig, predictor: Predictor) -> Result<Samples>
where
    I: IntoIterator<Item = &'a Point>,
{
    run(stream, cfg, BwcVariant::DeadReckoning { predictor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sed;

    fn total(s: &Samples) -> usize {
        s.values().map(|x| x.len()).sum()
    }

    #[test]
    fn lossless_when_bw_large() {
        let pts: Vec<Point> = (0..30)
            .map(|i| Point::new(i % 3, i as f64, (i * i) as f64, (i % 5) as f64))
            .collect();
        let cfg = WindowConfig::new(100, 10.0, 0.0).unwrap();
        for variant in [
            BwcVariant::Squish,
            BwcVariant::StTrace,
            BwcVariant::StTraceImp {
                precision: 1.0,
                sign: ImpSign::ErrorIncrease,
            },
            BwcVariant::DeadReckoning {
                predictor: Predictor::TwoPoint,
            },
        ] {
            let out = run(&pts, cfg, variant).unwrap();
            assert_eq!(total(&out), 30, "{variant:?}");
        }
    }

    #[test]
    fn cap_binds_in_single_window() {
        let pts: Vec<Point> = (0..10)
            .map(|i| Point::new(1, i as f64, 10.0 * i as f64, ((i * 7) % 4) as f64))
            .collect();
        let cfg = WindowConfig::new(4, 100.0, 0.0).unwrap();
        let out = bwc_squish(&pts, cfg).unwrap();
        assert_eq!(out[&1].len(), 4);
    }

    #[test]
    fn desk_trace_three_trajectories_all_infinite() {
        // 3 trajectories x 4 points, interleaved, bw = 2, single window.
        // Each arrival is evicted-to before its trajectory gets a second
        // point, so every entry is infinite and FIFO drops the oldest.
        let mut pts = Vec::new();
        for step in 0..4 {
            for id in 0..3u64 {
                let ts = (step * 3 + id) as f64;
                pts.push(Point::new(id, ts, step as f64 * 10.0, (step % 2) as f64 * 5.0));
            }
        }
        let cfg = WindowConfig::new(2, 1000.0, 0.0).unwrap();
        let out = bwc_squish(&pts, cfg).unwrap();
        assert_eq!(total(&out), 2);
        // only the two latest arrivals survive
        assert!(!out.contains_key(&0));
        assert_eq!(out[&1].points, vec![pts[10]]);
        assert_eq!(out[&2].points, vec![pts[11]]);
    }

    #[test]
    fn committed_point_anchors_next_window() {
        // Window 0 [0,10): a(0) b(5), bw 2 -> both committed.
        // Window 1: c(12) d(15). When d arrives, c's priority is SED(b, c, d)
        // with b committed in window 0.
        let a = Point::new(1, 0.0, 0.0, 0.0);
        let b = Point::new(1, 5.0, 5.0, 0.0);
        let c = Point::new(1, 12.0, 12.0, 4.0);
        let d = Point::new(1, 15.0, 15.0, 0.0);
        let mut comp = BwcCompressor::new(WindowConfig::new(2, 10.0, 0.0).unwrap(), BwcVariant::StTrace).unwrap();
        for p in [a, b, c, d] {
            comp.push(p).unwrap();
        }
        assert_eq!(comp.commits(), &[WindowCommit { window: 0, count: 2 }]);
        let q = comp.queued();
        let qc = q.iter().find(|x| x.point == c).unwrap();
        assert_eq!(qc.priority, sed(&b, &c, &d).unwrap());
        // one more point overflows window 1; c (4 m) is cheaper than d (7 m)
        let e = Point::new(1, 18.0, 18.0, 10.0);
        let ev = comp.push(e).unwrap().eviction.unwrap();
        assert_eq!(ev.point, c);
        // d's recomputed priority uses committed b as left neighbour
        assert_eq!(ev.neighbors.len(), 1);
        assert_eq!(ev.neighbors[0].after, sed(&b, &d, &e).unwrap());
        let out = comp.finish().unwrap();
        assert_eq!(out[&1].points, vec![a, b, d, e]);
    }

    #[test]
    fn empty_windows_are_skipped() {
        let pts = [
            Point::new(1, 0.0, 0.0, 0.0),
            Point::new(1, 55.0, 1.0, 0.0),
        ];
        let mut c = BwcCompressor::new(WindowConfig::new(1, 10.0, 0.0).unwrap(), BwcVariant::Squish).unwrap();
        for p in pts {
            c.push(p).unwrap();
        }
        assert_eq!(c.current_window(), Some(5));
        let out = c.finish().unwrap();
        assert_eq!(out[&1].len(), 2);
    }

    #[test]
    fn dr_bootstrap_and_cascade() {
        // straight line at 1 m/s then a kink
        let pts: Vec<Point> = [(0., 0.), (1., 0.), (2., 0.), (3., 0.), (4., 3.)]
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Point::new(1, i as f64, x, y))
            .collect();
        let mut c = BwcCompressor::new(
            WindowConfig::new(3, 100.0, 0.0).unwrap(),
            BwcVariant::DeadReckoning {
                predictor: Predictor::TwoPoint,
            },
        )
        .unwrap();
        for p in &pts[..4] {
            c.push(*p).unwrap();
        }
        // p2 had priority 0 and was evicted when p3 arrived; p3 is
        // re-based on (p0, p1): still exactly predicted.
        let q = c.queued();
        assert_eq!(q.len(), 3);
        assert!(q.iter().filter(|x| x.priority.is_infinite()).count() == 2);
        let ev = c.push(pts[4]).unwrap().eviction.unwrap();
        assert_eq!(ev.point, pts[3]);
        // p4 now predicted from (p0, p1): (4,0) vs (4,3)
        assert_eq!(ev.neighbors[0].point, pts[4]);
        assert_eq!(ev.neighbors[0].after, 3.0);
    }

    #[test]
    fn ordering_errors() {
        let mut c = BwcCompressor::new(WindowConfig::new(3, 10.0, 0.0).unwrap(), BwcVariant::Squish).unwrap();
        c.push(Point::new(1, 5.0, 0.0, 0.0)).unwrap();
        assert!(matches!(c.push(Point::new(2, 4.0, 0.0, 0.0)), Err(Error::Ordering { .. })));
        let mut c = BwcCompressor::new(WindowConfig::new(3, 10.0, 100.0).unwrap(), BwcVariant::Squish).unwrap();
        assert!(c.push(Point::new(1, 5.0, 0.0, 0.0)).is_err());
    }
}
