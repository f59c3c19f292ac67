//! Directed exploration graph over state keys.
//!
//! Each node holds the action table of one observed state. Tested actions carry
//! their outcome; only `moved_to` edges between distinct states are used for
//! path planning. Frontier distances (edges to the nearest node that still has
//! an untested action at or above a given salience tier) are cached per tier
//! and recomputed lazily after the graph changes.

mod dump;
mod frontier;
mod select;

pub use dump::{GraphDump, NodeDump, RecordDump};
pub use select::{Branch, Selection};

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::ActionRef;
use crate::frame::{PriorityTier, ProcessedFrame, StateKey, TieredAction};

/// Result of executing a tested action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "state", rename_all = "snake_case")]
pub enum Outcome {
    MovedTo(StateKey),
    NoChange,
    CausedReset,
    CompletedLevel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestStatus {
    Untested,
    Tested,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionRecord {
    pub action: ActionRef,
    pub priority: PriorityTier,
    /// Present exactly when the action has been tested.
    pub outcome: Option<Outcome>,
}

impl ActionRecord {
    pub fn status(&self) -> TestStatus {
        if self.outcome.is_some() {
            TestStatus::Tested
        } else {
            TestStatus::Untested
        }
    }

    pub fn is_untested_within(&self, threshold: PriorityTier) -> bool {
        self.outcome.is_none() && self.priority <= threshold
    }

    /// Successor usable for path planning.
    fn planning_successor(&self, from: StateKey) -> Option<StateKey> {
        match self.outcome {
            Some(Outcome::MovedTo(next)) if next != from => Some(next),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub key: StateKey,
    pub actions: Vec<ActionRecord>,
    index: HashMap<ActionRef, usize>,
    /// Nodes with a traversable edge into this one.
    predecessors: Vec<StateKey>,
    frontier_distance: [Option<u32>; PriorityTier::COUNT],
}

impl GraphNode {
    fn new(key: StateKey, actions: &[TieredAction]) -> Self {
        let mut records = Vec::with_capacity(actions.len());
        let mut index = HashMap::with_capacity(actions.len());
        for a in actions {
            // duplicate action refs keep their first tier
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(a.action) {
                slot.insert(records.len());
                records.push(ActionRecord {
                    action: a.action,
                    priority: a.tier,
                    outcome: None,
                });
            }
        }
        GraphNode {
            key,
            actions: records,
            index,
            predecessors: Vec::new(),
            frontier_distance: [None; PriorityTier::COUNT],
        }
    }

    pub fn record(&self, action: &ActionRef) -> Option<&ActionRecord> {
        self.index.get(action).map(|&i| &self.actions[i])
    }

    pub fn has_untested_within(&self, threshold: PriorityTier) -> bool {
        self.actions.iter().any(|r| r.is_untested_within(threshold))
    }

    pub fn untested_count(&self) -> usize {
        self.actions.iter().filter(|r| r.outcome.is_none()).count()
    }

    /// Cached frontier distance; only meaningful right after a recompute.
    pub fn cached_frontier_distance(&self, tier: PriorityTier) -> Option<u32> {
        self.frontier_distance[tier.index()]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("state {key} was revisited with a different action set")]
    ActionSetMismatch { key: StateKey },
    #[error("state {0} is not in the graph")]
    UnknownState(StateKey),
    #[error("action {action} is not offered in state {key}")]
    UnknownAction { key: StateKey, action: ActionRef },
    #[error("action {action} in state {key} was recorded as {recorded:?}, now observed {observed:?}")]
    ConflictingOutcome {
        key: StateKey,
        action: ActionRef,
        recorded: Outcome,
        observed: Outcome,
    },
    #[error("no untested action reachable from {from} at any tier")]
    Exhausted { from: StateKey },
}

/// Exploration graph for a single level.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    nodes: BTreeMap<StateKey, GraphNode>,
    start: StateKey,
    seed: u64,
    rng: ChaCha8Rng,
    dirty: [bool; PriorityTier::COUNT],
}

impl LevelGraph {
    /// A graph holding only the level's initial state.
    pub fn new(start: &ProcessedFrame, seed: u64) -> Self {
        Self::with_start_node(start.key, &start.actions, seed)
    }

    /// Builds a graph from an abstract start node; used where no frame exists.
    pub fn with_start_node(start: StateKey, actions: &[TieredAction], seed: u64) -> Self {
        let mut nodes = BTreeMap::new();
        nodes.insert(start, GraphNode::new(start, actions));
        LevelGraph {
            nodes,
            start,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            dirty: [true; PriorityTier::COUNT],
        }
    }

    pub fn start(&self) -> StateKey {
        self.start
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn node(&self, key: StateKey) -> Option<&GraphNode> {
        self.nodes.get(&key)
    }

    pub fn contains(&self, key: StateKey) -> bool {
        self.nodes.contains_key(&key)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.values()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Total number of state-action pairs.
    pub fn pair_count(&self) -> usize {
        self.nodes.values().map(|n| n.actions.len()).sum()
    }

    pub fn tested_count(&self) -> usize {
        self.nodes
            .values()
            .map(|n| n.actions.len() - n.untested_count())
            .sum()
    }

    /// Returns the node for `pf.key`, creating it with all actions untested.
    ///
    /// A known state must present the same non-status-bar actions as when it
    /// was first seen; status-bar clicks are exempt since their segments track
    /// the step counter, which the state key masks out.
    pub fn ensure_node(&mut self, pf: &ProcessedFrame) -> Result<&GraphNode, GraphError> {
        if let Some(node) = self.nodes.get(&pf.key) {
            let known = node.actions.iter().filter(|r| r.priority != PriorityTier::LOWEST);
            let seen = pf.stable_actions();
            if !known.map(|r| (r.action, r.priority)).eq(seen.map(|a| (a.action, a.tier))) {
                return Err(GraphError::ActionSetMismatch { key: pf.key });
            }
            return Ok(&self.nodes[&pf.key]);
        }
        Ok(self.insert_node(pf.key, &pf.actions))
    }

    /// Adds a node from an abstract action list; a known key is left unchanged.
    pub fn insert_node(&mut self, key: StateKey, actions: &[TieredAction]) -> &GraphNode {
        if let std::collections::btree_map::Entry::Vacant(slot) = self.nodes.entry(key) {
            slot.insert(GraphNode::new(key, actions));
            if !actions.is_empty() {
                self.dirty = [true; PriorityTier::COUNT];
            }
        }
        &self.nodes[&key]
    }

    /// Marks `action` in `from` as tested with `outcome`.
    ///
    /// Resets and level completions are recorded like any other outcome, so a
    /// reset-inducing action is never offered again as untested.
    pub fn record_transition(&mut self, from: StateKey, action: &ActionRef, outcome: Outcome) -> Result<(), GraphError> {
        if let Outcome::MovedTo(next) = outcome {
            if !self.nodes.contains_key(&next) {
                return Err(GraphError::UnknownState(next));
            }
        }
        let node = self.nodes.get_mut(&from).ok_or(GraphError::UnknownState(from))?;
        let &i = node
            .index
            .get(action)
            .ok_or(GraphError::UnknownAction { key: from, action: *action })?;
        let record = &mut node.actions[i];
        match record.outcome {
            Some(recorded) if recorded == outcome => return Ok(()),
            Some(recorded) => {
                return Err(GraphError::ConflictingOutcome {
                    key: from,
                    action: *action,
                    recorded,
                    observed: outcome,
                })
            }
            None => record.outcome = Some(outcome),
        }
        if let Some(next) = record.planning_successor(from) {
            self.nodes.get_mut(&next).unwrap().predecessors.push(from);
        }
        self.dirty = [true; PriorityTier::COUNT];
        Ok(())
    }

    /// Edges from `key` to the nearest node holding an untested action of
    /// priority at most `tier`, or `None` when no such node is reachable.
    pub fn frontier_distance(&mut self, key: StateKey, tier: PriorityTier) -> Option<u32> {
        if self.dirty[tier.index()] {
            self.recompute_frontiers(tier);
        }
        self.nodes.get(&key).and_then(|n| n.frontier_distance[tier.index()])
    }

    pub fn dump(&self) -> GraphDump {
        GraphDump::from_graph(self)
    }
}
