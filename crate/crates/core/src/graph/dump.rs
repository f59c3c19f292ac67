use serde::{Deserialize, Serialize};

use super::{LevelGraph, Outcome, TestStatus};
use crate::action::ActionRef;
use crate::frame::{PriorityTier, StateKey};

/// JSON snapshot of a level graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub start: StateKey,
    pub seed: u64,
    pub nodes: Vec<NodeDump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDump {
    pub key: StateKey,
    pub actions: Vec<RecordDump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDump {
    pub action: ActionRef,
    pub priority: PriorityTier,
    pub status: TestStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outcome: Option<Outcome>,
}

impl GraphDump {
    pub(super) fn from_graph(graph: &LevelGraph) -> Self {
        GraphDump {
            start: graph.start,
            seed: graph.seed,
            nodes: graph
                .nodes
                .values()
                .map(|n| NodeDump {
                    key: n.key,
                    actions: n
                        .actions
                        .iter()
                        .map(|r| RecordDump {
                            action: r.action,
                            priority: r.priority,
                            status: r.status(),
                            outcome: r.outcome,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a graph with the recorded outcomes. The selection RNG restarts
    /// from the seed.
    pub fn restore(&self) -> Result<LevelGraph, super::GraphError> {
        let tiered = |n: &NodeDump| -> Vec<crate::frame::TieredAction> {
            n.actions
                .iter()
                .map(|r| crate::frame::TieredAction {
                    action: r.action,
                    tier: r.priority,
                })
                .collect()
        };
        let start = self
            .nodes
            .iter()
            .find(|n| n.key == self.start)
            .ok_or(super::GraphError::UnknownState(self.start))?;
        let mut graph = LevelGraph::with_start_node(self.start, &tiered(start), self.seed);
        for n in &self.nodes {
            graph.insert_node(n.key, &tiered(n));
        }
        for n in &self.nodes {
            for r in &n.actions {
                if let Some(outcome) = r.outcome {
                    graph.record_transition(n.key, &r.action, outcome)?;
                }
            }
        }
        Ok(graph)
    }
}
