//! Addressable min-priority queue with FIFO tie-breaking.
//!
//! Entries are ordered by `(priority, seq)` where `seq` is the insertion
//! counter, so among equal priorities the oldest entry pops first. Updating
//! a priority keeps the entry's `seq`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueEntry<K> {
    pub key: K,
    pub priority: f64,
    pub seq: u64,
}

impl<K> QueueEntry<K> {
    #[inline]
    fn rank(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then(self.seq.cmp(&other.seq))
    }
}

#[derive(Debug, Clone)]
pub struct PriorityQueue<K> {
    heap: Vec<QueueEntry<K>>,
    index: HashMap<K, usize>,
    next_seq: u64,
}

impl<K: Copy + Eq + Hash> Default for PriorityQueue<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Copy + Eq + Hash> PriorityQueue<K> {
    pub fn new() -> Self {
        Self {
            heap: Vec::new(),
            index: HashMap::new(),
            next_seq: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, key: &K) -> bool {
        self.index.contains_key(key)
    }

    pub fn priority(&self, key: &K) -> Option<f64> {
        self.index.get(key).map(|&i| self.heap[i].priority)
    }

    pub fn entry(&self, key: &K) -> Option<QueueEntry<K>> {
        self.index.get(key).map(|&i| self.heap[i])
    }

    /// Inserts a new entry and returns its sequence number.
    pub fn add(&mut self, key: K, priority: f64) -> Result<u64> {
        if priority.is_nan() {
            return Err(Error::NanPriority);
        }
        if self.index.contains_key(&key) {
            return Err(Error::DuplicateEntry);
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        let i = self.heap.len();
        self.heap.push(QueueEntry { key, priority, seq });
        self.index.insert(key, i);
        self.sift_up(i);
        Ok(seq)
    }

    pub fn peek(&self) -> Option<&QueueEntry<K>> {
        self.heap.first()
    }

    pub fn min_priority(&self) -> Option<f64> {
        self.heap.first().map(|e| e.priority)
    }

    pub fn pop_min(&mut self) -> Result<QueueEntry<K>> {
        if self.heap.is_empty() {
            return Err(Error::EmptyQueue);
        }
        Ok(self.remove_at(0))
    }

    pub fn remove(&mut self, key: &K) -> Result<QueueEntry<K>> {
        let i = *self.index.get(key).ok_or(Error::MissingEntry)?;
        Ok(self.remove_at(i))
    }

    pub fn update_priority(&mut self, key: &K, priority: f64) -> Result<()> {
        if priority.is_nan() {
            return Err(Error::NanPriority);
        }
        let i = *self.index.get(key).ok_or(Error::MissingEntry)?;
        let old = self.heap[i].priority;
        self.heap[i].priority = priority;
        match priority.total_cmp(&old) {
            Ordering::Less => self.sift_up(i),
            Ordering::Greater => self.sift_down(i),
            Ordering::Equal => {}
        }
        Ok(())
    }

    /// Drops every live entry, returning their keys in heap order.
    pub fn flush(&mut self) -> Vec<K> {
        self.index.clear();
        self.heap.drain(..).map(|e| e.key).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &QueueEntry<K>> {
        self.heap.iter()
    }

    fn remove_at(&mut self, i: usize) -> QueueEntry<K> {
        let last = self.heap.len() - 1;
        self.swap(i, last);
        let out = self.heap.pop().expect("non-empty heap");
        self.index.remove(&out.key);
        if i < self.heap.len() {
            self.sift_down(i);
            self.sift_up(i);
        }
        out
    }

    fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.heap.swap(a, b);
        self.index.insert(self.heap[a].key, a);
        self.index.insert(self.heap[b].key, b);
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.heap[i].rank(&self.heap[parent]) == Ordering::Less {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let m = if r < n && self.heap[r].rank(&self.heap[l]) == Ordering::Less {
                r
            } else {
                l
            };
            if self.heap[m].rank(&self.heap[i]) == Ordering::Less {
                self.swap(i, m);
                i = m;
            } else {
                break;
            }
        }
    }
}
