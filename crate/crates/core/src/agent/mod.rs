//! Episode loop and the four agents of the ablation ladder.

mod random;
mod trace;

pub use random::{step_random, TriedActions};
pub use trace::{TraceBranch, TraceRecord};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::ActionRef;
use crate::env::{EnvError, EnvSignal, Environment, ResetCause};
use crate::frame::{process, PriorityTier, ProcessedFrame, StateKey};
use crate::graph::{Branch, GraphDump, GraphError, LevelGraph, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Random,
    RandomSeg,
    RandomSegNewaction,
    GraphExplorer,
}

impl AgentKind {
    /// The ladder, from the plain random agent to the full explorer.
    pub const LADDER: [AgentKind; 4] = [
        AgentKind::Random,
        AgentKind::RandomSeg,
        AgentKind::RandomSegNewaction,
        AgentKind::GraphExplorer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Random => "random",
            AgentKind::RandomSeg => "random_seg",
            AgentKind::RandomSegNewaction => "random_seg_newaction",
            AgentKind::GraphExplorer => "graph_explorer",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentKind::LADDER
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or_else(|| {
                let names: Vec<_> = AgentKind::LADDER.iter().map(|k| k.name()).collect();
                format!("unknown agent `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Classification of one environment step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOutcome {
    StateChanged,
    NoChange,
    LevelReset,
    LevelCompleted,
    /// The last level was completed; nothing is left to play.
    GameOver,
}

/// Classifies a step. Environment signals take precedence over the keys.
pub fn interpret_outcome(prev: &ProcessedFrame, next: &ProcessedFrame, signal: Option<EnvSignal>) -> StepOutcome {
    match signal {
        Some(EnvSignal::GameWon) => StepOutcome::GameOver,
        Some(EnvSignal::LevelComplete) => StepOutcome::LevelCompleted,
        Some(EnvSignal::LevelReset(_)) => StepOutcome::LevelReset,
        None if next.key == prev.key => StepOutcome::NoChange,
        None => StepOutcome::StateChanged,
    }
}

#[derive(Clone, Debug, Default)]
pub struct EpisodeOptions {
    /// Reproduces the published explorer: every level restart marks the
    /// causing action `caused_reset`, including step-counter expiries, and the
    /// explorer never restarts a level just because the start state is closer
    /// to a frontier.
    pub paper_faithful: bool,
    /// Collects a per-step trace.
    pub trace: bool,
    /// Keeps a dump of every level graph.
    pub keep_graphs: bool,
    /// Soft wall-clock limit, checked between steps.
    pub wall_clock: Option<Duration>,
}

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("nondeterminism detected at step {step}: {source}")]
    NondeterminismDetected {
        step: u64,
        #[source]
        source: GraphError,
    },
    #[error("nondeterminism detected at step {step}: level restarted in {observed}, expected start state {expected}")]
    StartMismatch {
        step: u64,
        expected: StateKey,
        observed: StateKey,
    },
    #[error("environment failure at step {step}: {source}")]
    Env {
        step: u64,
        #[source]
        source: EnvError,
    },
}

/// Accounting of a finished episode.
#[derive(Clone, Debug)]
pub struct EpisodeState {
    pub kind: AgentKind,
    pub seed: u64,
    pub budget: u64,
    /// Graph of the level being played when the episode ended.
    pub graph: Option<LevelGraph>,
    pub current_key: StateKey,
    pub threshold: PriorityTier,
    pub steps_taken: u64,
    pub levels_completed: usize,
    /// `(level index, steps spent on it)` for each completed level.
    pub per_level_steps: Vec<(usize, u64)>,
    pub current_level_steps: u64,
    pub level_resets: u64,
    pub game_won: bool,
    /// The explorer ran out of untested actions without finishing the level.
    pub stuck: bool,
    pub timed_out: bool,
    pub trace: Vec<TraceRecord>,
    /// One dump per level played, including the last one, when requested.
    pub graphs: Vec<GraphDump>,
}

impl EpisodeState {
    /// Cumulative step count at which each completed level was solved.
    pub fn completion_steps(&self) -> Vec<u64> {
        self.per_level_steps
            .iter()
            .scan(0, |acc, &(_, s)| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }
}

fn level_seed(seed: u64, level: usize) -> u64 {
    seed ^ (level as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Plays `env` from a fresh reset for at most `budget` steps.
///
/// On level completion the graph is discarded and the threshold returns to 1.
/// On a level restart the explorer re-enters the start node of the same graph,
/// after recording the causing action as `caused_reset` (see [`EpisodeOptions`]).
pub fn run_episode<E: Environment + ?Sized>(
    env: &mut E,
    kind: AgentKind,
    budget: u64,
    seed: u64,
    opts: &EpisodeOptions,
) -> Result<EpisodeState, AgentError> {
    if budget == 0 {
        return Err(AgentError::ZeroBudget);
    }
    let started = Instant::now();
    let scheme = env.scheme();
    let env_err = |step: u64| move |source: EnvError| AgentError::Env { step, source };
    let graph_err = |step: u64| move |source: GraphError| AgentError::NondeterminismDetected { step, source };

    let frame = env.reset().map_err(env_err(0))?;
    let frame_size = (frame.width(), frame.height());
    let mut pf = process(&frame, scheme);
    let mut start = pf.key;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = TriedActions::default();
    let explorer = kind == AgentKind::GraphExplorer;
    let mut graph = explorer.then(|| LevelGraph::new(&pf, level_seed(seed, 0)));

    let mut st = EpisodeState {
        kind,
        seed,
        budget,
        graph: None,
        current_key: pf.key,
        threshold: PriorityTier::HIGHEST,
        steps_taken: 0,
        levels_completed: 0,
        per_level_steps: Vec::new(),
        current_level_steps: 0,
        level_resets: 0,
        game_won: false,
        stuck: false,
        timed_out: false,
        trace: Vec::new(),
        graphs: Vec::new(),
    };

    while st.steps_taken < budget {
        if opts.wall_clock.is_some_and(|limit| started.elapsed() >= limit) {
            st.timed_out = true;
            break;
        }
        let step = st.steps_taken;
        let level = st.levels_completed;

        // choose
        let (action, branch, was_tested) = match graph.as_mut() {
            Some(g) => {
                g.ensure_node(&pf).map_err(graph_err(step))?;
                match choose_explorer(g, pf.key, start, &mut st.threshold, opts.paper_faithful) {
                    Some((action, branch)) => {
                        let tested = g
                            .node(pf.key)
                            .and_then(|n| n.record(&action))
                            .is_some_and(|r| r.outcome.is_some());
                        (action, branch, tested)
                    }
                    None => {
                        info!("{}: level {} exhausted after {} steps", env.game_id(), level + 1, st.current_level_steps);
                        st.stuck = true;
                        break;
                    }
                }
            }
            None => {
                let action = step_random(scheme, frame_size, &pf, kind, &tried, &mut rng);
                let tested = tried.contains(pf.key, &action);
                (action, TraceBranch::Random, tested)
            }
        };

        // act
        let result = env.step(&action).map_err(env_err(step))?;
        st.steps_taken += 1;
        st.current_level_steps += 1;
        let next = process(&result.frame, scheme);
        let outcome = interpret_outcome(&pf, &next, result.signal);
        if kind == AgentKind::RandomSegNewaction {
            tried.mark(pf.key, action);
        }

        // learn
        let mut recorded_reset = false;
        let cause = match result.signal {
            Some(EnvSignal::LevelReset(c)) => Some(c),
            _ => None,
        };
        if let Some(g) = graph.as_mut() {
            match outcome {
                StepOutcome::StateChanged => {
                    g.ensure_node(&next).map_err(graph_err(step))?;
                    g.record_transition(pf.key, &action, Outcome::MovedTo(next.key))
                        .map_err(graph_err(step))?;
                }
                StepOutcome::NoChange => {
                    g.record_transition(pf.key, &action, Outcome::NoChange)
                        .map_err(graph_err(step))?;
                }
                StepOutcome::LevelCompleted | StepOutcome::GameOver => {
                    g.record_transition(pf.key, &action, Outcome::CompletedLevel)
                        .map_err(graph_err(step))?;
                }
                StepOutcome::LevelReset => {
                    recorded_reset = record_reset(g, pf.key, &action, cause, opts.paper_faithful).map_err(graph_err(step))?;
                }
            }
        }

        if opts.trace {
            st.trace.push(TraceRecord {
                step: st.steps_taken,
                level: level + 1,
                key: pf.key,
                action,
                branch,
                was_tested,
                outcome,
                cause,
                caused_reset: recorded_reset,
                threshold: st.threshold.value(),
                nodes: graph.as_ref().map_or(0, |g| g.node_count()),
            });
        }

        match outcome {
            StepOutcome::LevelCompleted | StepOutcome::GameOver => {
                debug!("{}: level {} solved in {} steps", env.game_id(), level + 1, st.current_level_steps);
                st.per_level_steps.push((level, st.current_level_steps));
                st.current_level_steps = 0;
                st.levels_completed += 1;
                st.threshold = PriorityTier::HIGHEST;
                tried.clear();
                if opts.keep_graphs {
                    if let Some(g) = &graph {
                        st.graphs.push(g.dump());
                    }
                }
                pf = next;
                start = pf.key;
                if outcome == StepOutcome::GameOver {
                    st.game_won = true;
                    graph = None;
                    break;
                }
                if explorer {
                    graph = Some(LevelGraph::new(&pf, level_seed(seed, st.levels_completed)));
                }
            }
            StepOutcome::LevelReset => {
                st.level_resets += 1;
                st.threshold = PriorityTier::HIGHEST;
                if explorer && next.key != start {
                    return Err(AgentError::StartMismatch {
                        step: st.steps_taken,
                        expected: start,
                        observed: next.key,
                    });
                }
                pf = next;
            }
            _ => pf = next,
        }
    }

    st.current_key = pf.key;
    if opts.keep_graphs {
        if let Some(g) = &graph {
            st.graphs.push(g.dump());
        }
    }
    st.graph = graph;
    Ok(st)
}

/// Records a level restart caused by `action`. Returns whether a
/// `caused_reset` edge was added.
///
/// An untested action is marked with the reset so that it is never retried as
/// untested. Outside paper-faithful mode a restart the environment attributes
/// to the step counter leaves the action untested, since the counter can run
/// out on any move. For an already tested action the restart is only checked
/// for consistency when the environment blames the action itself.
fn record_reset(
    g: &mut LevelGraph,
    from: StateKey,
    action: &ActionRef,
    cause: Option<ResetCause>,
    paper_faithful: bool,
) -> Result<bool, GraphError> {
    if *action == ActionRef::Reset || cause == Some(ResetCause::Requested) {
        return Ok(false);
    }
    if cause == Some(ResetCause::StepLimit) && !paper_faithful {
        return Ok(false);
    }
    let recorded = g
        .node(from)
        .ok_or(GraphError::UnknownState(from))?
        .record(action)
        .ok_or(GraphError::UnknownAction { key: from, action: *action })?
        .outcome;
    match recorded {
        None => {
            g.record_transition(from, action, Outcome::CausedReset)?;
            Ok(true)
        }
        Some(Outcome::CausedReset) => Ok(false),
        Some(other) if cause == Some(ResetCause::Action) => Err(GraphError::ConflictingOutcome {
            key: from,
            action: *action,
            recorded: other,
            observed: Outcome::CausedReset,
        }),
        Some(_) => Ok(false),
    }
}

/// Explorer policy around hierarchical selection: returns `None` once nothing
/// untested is reachable from the current state or, through a reset, from the
/// start state.
fn choose_explorer(
    g: &mut LevelGraph,
    current: StateKey,
    start: StateKey,
    threshold: &mut PriorityTier,
    paper_faithful: bool,
) -> Option<(ActionRef, TraceBranch)> {
    match g.select_action(current, *threshold) {
        Ok(sel) => {
            *threshold = sel.threshold;
            if sel.branch == Branch::Frontier && !paper_faithful && current != start {
                if let Some(from_start) = g.frontier_distance(start, sel.threshold) {
                    if from_start + 1 < sel.distance {
                        return Some((ActionRef::Reset, TraceBranch::Reset));
                    }
                }
            }
            let branch = match sel.branch {
                Branch::Untested => TraceBranch::Untested,
                Branch::Frontier => TraceBranch::Frontier,
            };
            Some((sel.action, branch))
        }
        Err(GraphError::Exhausted { .. }) => {
            // frontier may still lie behind a one-way edge: restart the level
            if current != start && g.frontier_distance(start, PriorityTier::LOWEST).is_some() {
                *threshold = PriorityTier::HIGHEST;
                Some((ActionRef::Reset, TraceBranch::Reset))
            } else {
                None
            }
        }
        Err(e) => unreachable!("current state is in the graph: {e}"),
    }
}
