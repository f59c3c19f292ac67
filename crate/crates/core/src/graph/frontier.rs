use std::collections::{HashMap, VecDeque};

use super::LevelGraph;
use crate::frame::{PriorityTier, StateKey};

impl LevelGraph {
    /// Multi-source BFS backwards along traversable edges from every node
    /// holding an untested action of priority at most `tier`.
    pub fn recompute_frontiers(&mut self, tier: PriorityTier) {
        let t = tier.index();
        let mut dist: HashMap<StateKey, u32> = HashMap::with_capacity(self.nodes.len());
        let mut queue = VecDeque::new();
        for node in self.nodes.values() {
            if node.has_untested_within(tier) {
                dist.insert(node.key, 0);
                queue.push_back(node.key);
            }
        }
        while let Some(key) = queue.pop_front() {
            let d = dist[&key];
            for &pred in &self.nodes[&key].predecessors {
                dist.entry(pred).or_insert_with(|| {
                    queue.push_back(pred);
                    d + 1
                });
            }
        }
        for node in self.nodes.values_mut() {
            node.frontier_distance[t] = dist.get(&node.key).copied();
        }
        self.dirty[t] = false;
    }
}
