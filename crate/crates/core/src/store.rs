//! Arena of per-trajectory samples stored as doubly linked lists, so that
//! points can be dropped from the middle of a sample in O(1).

use std::collections::BTreeMap;

use crate::types::{Point, Sample, Samples, TrajectoryId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct NodeId(pub(crate) usize);

#[derive(Debug, Clone)]
struct Node {
    point: Point,
    prev: Option<NodeId>,
    next: Option<NodeId>,
    live: bool,
}

#[derive(Debug, Clone, Copy)]
struct Ends {
    head: NodeId,
    tail: NodeId,
    len: usize,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct SampleStore {
    nodes: Vec<Node>,
    ends: BTreeMap<TrajectoryId, Ends>,
}

impl SampleStore {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Appends `p` at the end of its trajectory's sample. Ordering is the
    /// caller's responsibility.
    pub(crate) fn append(&mut self, p: Point) -> NodeId {
        let id = NodeId(self.nodes.len());
        let prev = self.ends.get(&p.id).map(|e| e.tail);
        self.nodes.push(Node {
            point: p,
            prev,
            next: None,
            live: true,
        });
        match self.ends.get_mut(&p.id) {
            Some(e) => {
                self.nodes[e.tail.0].next = Some(id);
                e.tail = id;
                e.len += 1;
            }
            None => {
                self.ends.insert(
                    p.id,
                    Ends {
                        head: id,
                        tail: id,
                        len: 1,
                    },
                );
            }
        }
        id
    }

    /// Unlinks `n`, returning its former neighbours.
    pub(crate) fn remove(&mut self, n: NodeId) -> (Option<NodeId>, Option<NodeId>) {
        let Node {
            point, prev, next, ..
        } = self.nodes[n.0];
        debug_assert!(self.nodes[n.0].live);
        self.nodes[n.0].live = false;
        if let Some(p) = prev {
            self.nodes[p.0].next = next;
        }
        if let Some(q) = next {
            self.nodes[q.0].prev = prev;
        }
        let remove_entry = {
            let e = self.ends.get_mut(&point.id).expect("trajectory present");
            e.len -= 1;
            if e.head == n {
                if let Some(q) = next {
                    e.head = q;
                }
            }
            if e.tail == n {
                if let Some(p) = prev {
                    e.tail = p;
                }
            }
            e.len == 0
        };
        if remove_entry {
            self.ends.remove(&point.id);
        }
        (prev, next)
    }

    #[inline]
    pub(crate) fn point(&self, n: NodeId) -> &Point {
        &self.nodes[n.0].point
    }

    #[inline]
    pub(crate) fn prev(&self, n: NodeId) -> Option<NodeId> {
        self.nodes[n.0].prev
    }

    #[inline]
    pub(crate) fn next(&self, n: NodeId) -> Option<NodeId> {
        self.nodes[n.0].next
    }

    pub(crate) fn tail(&self, id: TrajectoryId) -> Option<NodeId> {
        self.ends.get(&id).map(|e| e.tail)
    }

    pub(crate) fn sample_len(&self, id: TrajectoryId) -> usize {
        self.ends.get(&id).map_or(0, |e| e.len)
    }

    pub(crate) fn ids(&self) -> impl Iterator<Item = TrajectoryId> + '_ {
        self.ends.keys().copied()
    }

    pub(crate) fn nodes_of(&self, id: TrajectoryId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.sample_len(id));
        let mut cur = self.ends.get(&id).map(|e| e.head);
        while let Some(n) = cur {
            out.push(n);
            cur = self.nodes[n.0].next;
        }
        out
    }

    pub(crate) fn points_of(&self, id: TrajectoryId) -> Vec<Point> {
        self.nodes_of(id)
            .into_iter()
            .map(|n| self.nodes[n.0].point)
            .collect()
    }

    pub(crate) fn samples(&self) -> Samples {
        self.ids()
            .map(|id| (id, Sample::new(id, self.points_of(id))))
            .collect()
    }
}
