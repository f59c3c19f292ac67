use serde::{Deserialize, Serialize};

use super::StepOutcome;
use crate::action::ActionRef;
use crate::env::ResetCause;
use crate::frame::StateKey;

/// Why the agent took an action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceBranch {
    /// Untested action in the current state.
    Untested,
    /// Hop toward the nearest frontier.
    Frontier,
    /// Deliberate level restart by the explorer.
    Reset,
    /// Baseline agents.
    Random,
}

/// One line of a JSON-lines episode trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    /// 1-based step index within the episode.
    pub step: u64,
    /// 1-based level the step was taken in.
    pub level: usize,
    /// State the action was taken from.
    pub key: StateKey,
    pub action: ActionRef,
    pub branch: TraceBranch,
    /// The action had a recorded outcome before this step.
    pub was_tested: bool,
    pub outcome: StepOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cause: Option<ResetCause>,
    /// This step added a `caused_reset` edge.
    #[serde(default)]
    pub caused_reset: bool,
    pub threshold: u8,
    /// Graph size after the step.
    pub nodes: usize,
}

impl TraceRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace records always serialize")
    }
}
