use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::AgentKind;
use crate::action::{ActionRef, ActionScheme};
use crate::frame::{ProcessedFrame, StateKey};

/// Per-state record of executed actions, for [`AgentKind::RandomSegNewaction`].
#[derive(Clone, Debug, Default)]
pub struct TriedActions {
    tried: HashMap<StateKey, HashSet<ActionRef>>,
}

impl TriedActions {
    pub fn mark(&mut self, key: StateKey, action: ActionRef) {
        self.tried.entry(key).or_default().insert(action);
    }

    pub fn contains(&self, key: StateKey, action: &ActionRef) -> bool {
        self.tried.get(&key).is_some_and(|s| s.contains(action))
    }

    pub fn clear(&mut self) {
        self.tried.clear();
    }
}

/// Action choice of the three baseline rungs.
///
/// `random` draws from the raw action space of the scheme (4, 4096 or 4100
/// actions). `random_seg` draws from the processed action set. On an arrow
/// scheme both consume the generator identically, so they act alike.
pub fn step_random(
    scheme: ActionScheme,
    frame_size: (usize, usize),
    pf: &ProcessedFrame,
    kind: AgentKind,
    tried: &TriedActions,
    rng: &mut ChaCha8Rng,
) -> ActionRef {
    match kind {
        AgentKind::Random => {
            let (width, height) = frame_size;
            let index = rng.random_range(0..scheme.raw_size(width, height));
            scheme.raw_action(index, width)
        }
        AgentKind::RandomSeg => pf.actions[rng.random_range(0..pf.actions.len())].action,
        AgentKind::RandomSegNewaction => {
            let fresh: Vec<ActionRef> = pf
                .actions
                .iter()
                .map(|a| a.action)
                .filter(|a| !tried.contains(pf.key, a))
                .collect();
            if fresh.is_empty() {
                pf.actions[rng.random_range(0..pf.actions.len())].action
            } else {
                fresh[rng.random_range(0..fresh.len())]
            }
        }
        AgentKind::GraphExplorer => unreachable!("the explorer selects through its graph"),
    }
}
