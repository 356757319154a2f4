use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::types::{Point, Stream, Trajectory, TrajectoryId};

#[derive(Debug)]
struct Head {
    ts: f64,
    id: TrajectoryId,
    traj: usize,
    idx: usize,
}

impl PartialEq for Head {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Head {}

impl PartialOrd for Head {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Head {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ts
            .total_cmp(&other.ts)
            .then(self.id.cmp(&other.id))
            .then(self.traj.cmp(&other.traj))
            .then(self.idx.cmp(&other.idx))
    }
}

/// K-way merge of time-ordered trajectories into one stream. Equal
/// timestamps are ordered by trajectory id, then by input position.
pub fn merge_stream<'a, I>(trajectories: I) -> Stream
where
    I: IntoIterator<Item = &'a Trajectory>,
{
    let trajs: Vec<&Trajectory> = trajectories.into_iter().collect();
    let total = trajs.iter().map(|t| t.len()).sum();
    let mut heap = BinaryHeap::with_capacity(trajs.len());
    for (k, t) in trajs.iter().enumerate() {
        if let Some(p) = t.points().first() {
            heap.push(Reverse(Head {
                ts: p.ts,
                id: p.id,
                traj: k,
                idx: 0,
            }));
        }
    }
    let mut out: Vec<Point> = Vec::with_capacity(total);
    while let Some(Reverse(h)) = heap.pop() {
        let pts = trajs[h.traj].points();
        out.push(pts[h.idx]);
        if let Some(p) = pts.get(h.idx + 1) {
            heap.push(Reverse(Head {
                ts: p.ts,
                id: p.id,
                traj: h.traj,
                idx: h.idx + 1,
            }));
        }
    }
    Stream::from_ordered(out).expect("merge output is ordered")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn traj(id: TrajectoryId, ts: &[f64]) -> Trajectory {
        Trajectory::new(id, ts.iter().map(|&t| Point::new(id, t, t, 0.0)).collect()).unwrap()
    }

    #[test]
    fn interleaves() {
        let a = traj(1, &[0.0, 2.0, 4.0]);
        let b = traj(2, &[1.0, 3.0]);
        let s = merge_stream([&a, &b]);
        let ts: Vec<f64> = s.iter().map(|p| p.ts).collect();
        assert_eq!(ts, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn ties_lower_id_first() {
        let a = traj(9, &[5.0]);
        let b = traj(3, &[5.0]);
        let s = merge_stream([&a, &b]);
        assert_eq!(s.points()[0].id, 3);
    }

    #[test]
    fn matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trajs: Vec<Trajectory> = (0..100u64)
            .map(|id| {
                let mut t = rng.random_range(0..20) as f64;
                let pts = (0..rng.random_range(0..15))
                    .map(|_| {
                        t += rng.random_range(1..5) as f64;
                        Point::new(id, t, rng.random(), rng.random())
                    })
                    .collect();
                Trajectory::new(id, pts).unwrap()
            })
            .collect();
        let merged = merge_stream(&trajs);
        let mut all: Vec<(f64, u64, usize, Point)> = trajs
            .iter()
            .flat_map(|t| t.points().iter().enumerate().map(|(i, p)| (p.ts, p.id, i, *p)))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let expected: Vec<Point> = all.into_iter().map(|x| x.3).collect();
        assert_eq!(merged.points(), expected.as_slice());
    }
}
