use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::trajectory::Trajectory;

/// Keyed trajectory store with FIFO eviction at `capacity` per key.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayMemory {
    capacity: usize,
    entries: BTreeMap<u32, VecDeque<Trajectory>>,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> Self {
        Self { capacity: capacity.max(1), entries: BTreeMap::new() }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn push(&mut self, key: u32, t: Trajectory) {
        let q = self.entries.entry(key).or_default();
        q.push_back(t);
        while q.len() > self.capacity {
            q.pop_front();
        }
    }

    pub fn extend<I: IntoIterator<Item = Trajectory>>(&mut self, key: u32, ts: I) {
        for t in ts {
            self.push(key, t);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(VecDeque::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len_for(&self, key: u32) -> usize {
        self.entries.get(&key).map_or(0, VecDeque::len)
    }

    pub fn contains_key(&self, key: u32) -> bool {
        self.len_for(key) > 0
    }

    pub fn keys(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().filter(|(_, q)| !q.is_empty()).map(|(k, _)| *k)
    }

    pub fn get(&self, key: u32) -> impl Iterator<Item = &Trajectory> {
        self.entries.get(&key).into_iter().flatten()
    }

    /// Every stored trajectory, by key then oldest first.
    pub fn all(&self) -> Vec<&Trajectory> {
        self.entries.values().flatten().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Trajectory)> {
        self.entries.iter().flat_map(|(k, q)| q.iter().map(move |t| (*k, t)))
    }
}

/// Pushes a batch into `memory` under `key`, keeping the most recent.
pub fn memory_refresh(memory: &mut ReplayMemory, key: u32, batch: &[Trajectory]) {
    memory.extend(key, batch.iter().cloned());
}
