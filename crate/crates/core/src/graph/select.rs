use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GraphError, LevelGraph};
use crate::action::ActionRef;
use crate::frame::{PriorityTier, StateKey};

/// Which rule of the hierarchical policy produced an action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// An untested action of the current state.
    Untested,
    /// First hop of a shortest path toward the nearest frontier.
    Frontier,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selection {
    pub action: ActionRef,
    /// Working threshold after any escalation.
    pub threshold: PriorityTier,
    pub branch: Branch,
    /// Edges to the targeted frontier (0 for [`Branch::Untested`]).
    pub distance: u32,
}

impl LevelGraph {
    /// Hierarchical action selection.
    ///
    /// At threshold `p`: pick uniformly among the current state's untested
    /// actions with priority `<= p`; failing that, step toward the nearest
    /// reachable state that has one (ties: lowest successor key, then action
    /// order); failing that, retry with `p + 1`.
    pub fn select_action(&mut self, current: StateKey, threshold: PriorityTier) -> Result<Selection, GraphError> {
        if !self.contains(current) {
            return Err(GraphError::UnknownState(current));
        }
        let mut p = threshold;
        loop {
            let node = &self.nodes[&current];
            let untested: Vec<usize> = (0..node.actions.len())
                .filter(|&i| node.actions[i].is_untested_within(p))
                .collect();
            if !untested.is_empty() {
                let pick = untested[self.rng.random_range(0..untested.len())];
                return Ok(Selection {
                    action: self.nodes[&current].actions[pick].action,
                    threshold: p,
                    branch: Branch::Untested,
                    distance: 0,
                });
            }

            if let Some(d) = self.frontier_distance(current, p) {
                let t = p.index();
                let node = &self.nodes[&current];
                let hop = node
                    .actions
                    .iter()
                    .filter_map(|r| r.planning_successor(current).map(|next| (next, r.action)))
                    .filter(|(next, _)| self.nodes[next].frontier_distance[t] == Some(d - 1))
                    .min_by_key(|(next, _)| *next)
                    .expect("a node at frontier distance d has a successor at d - 1");
                return Ok(Selection {
                    action: hop.1,
                    threshold: p,
                    branch: Branch::Frontier,
                    distance: d,
                });
            }

            p = p.next().ok_or(GraphError::Exhausted { from: current })?;
        }
    }
}
