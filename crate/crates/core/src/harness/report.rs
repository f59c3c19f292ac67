use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::agent::{StepOutcome, TraceBranch, TraceRecord};
use crate::env::ResetCause;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelReport {
    /// 1-based.
    pub level: usize,
    pub steps: u64,
    pub completed: bool,
    /// Steps at which the working threshold rose.
    pub escalations: Vec<u64>,
    pub caused_reset_edges: usize,
    pub level_resets: usize,
    /// Largest number of times one action restarted the level by itself.
    pub max_presses_of_reset_action: usize,
    pub final_nodes: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TraceSummary {
    pub steps: u64,
    pub levels: Vec<LevelReport>,
    /// `(step, nodes)` whenever the graph grew.
    pub graph_size: Vec<(u64, usize)>,
    pub caused_reset_edges: usize,
    /// Steps where the untested branch picked an already tested action.
    pub violations: Vec<u64>,
}

/// Summarizes a JSON-lines trace. Blank lines are skipped.
pub fn emit_trace_report(text: &str) -> Result<TraceSummary, TraceParseError> {
    let mut summary = TraceSummary::default();
    let mut presses: BTreeMap<(usize, String), usize> = BTreeMap::new();
    let mut last: Option<TraceRecord> = None;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: TraceRecord = serde_json::from_str(line).map_err(|e| TraceParseError {
            line: i + 1,
            message: e.to_string(),
        })?;
        if summary.levels.last().is_none_or(|l| l.level != rec.level) {
            summary.levels.push(LevelReport {
                level: rec.level,
                ..Default::default()
            });
        }
        let same_level = last.as_ref().is_some_and(|l| l.level == rec.level);
        let level = summary.levels.last_mut().expect("pushed above");
        level.steps += 1;
        let prev_threshold = if same_level { last.as_ref().map(|l| l.threshold) } else { None };
        if prev_threshold.is_some_and(|p| rec.threshold > p) {
            level.escalations.push(rec.step);
        }
        match rec.outcome {
            StepOutcome::LevelCompleted | StepOutcome::GameOver => level.completed = true,
            StepOutcome::LevelReset => {
                level.level_resets += 1;
                if !matches!(rec.cause, Some(ResetCause::StepLimit | ResetCause::Requested)) {
                    let n = presses.entry((rec.level, rec.action.to_string())).or_default();
                    *n += 1;
                    level.max_presses_of_reset_action = level.max_presses_of_reset_action.max(*n);
                }
            }
            _ => {}
        }
        if rec.caused_reset {
            level.caused_reset_edges += 1;
            summary.caused_reset_edges += 1;
        }
        level.final_nodes = rec.nodes;
        if rec.branch == TraceBranch::Untested && rec.was_tested {
            summary.violations.push(rec.step);
        }
        if summary.graph_size.last().is_none_or(|&(_, n)| n != rec.nodes) {
            summary.graph_size.push((rec.step, rec.nodes));
        }
        summary.steps += 1;
        last = Some(rec);
    }
    Ok(summary)
}
