//! Experiment runner: episodes over games x agents x seeds, aggregated into
//! per-level tables.

mod output;
mod report;
mod table;

pub use output::{curve_grid, write_outputs, CurvePoint};
pub use report::{emit_trace_report, LevelReport, TraceParseError, TraceSummary};
pub use table::{median, AgentAggregate, GameSummary, LevelStats, ResultTable};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{run_episode, AgentKind, EpisodeOptions, TraceRecord};
use crate::client::{ApiConfig, ArcEnv, Pacer};
use crate::env::{builtin_game, Environment, GameSpec, SyntheticEnv};
use crate::graph::GraphDump;

pub const DEFAULT_BUDGET: u64 = 4_000;
/// Most steps a single game can receive under the competition limits.
pub const MAX_BUDGET: u64 = 96_000;
pub const DEFAULT_RUNS: usize = 5;

#[derive(Clone, Debug)]
pub enum GameSource {
    Synthetic(GameSpec),
    /// A live game, opened with the config's API settings.
    Remote { game_id: String },
}

impl GameSource {
    pub fn builtin(name: &str) -> Option<Self> {
        builtin_game(name).map(GameSource::Synthetic)
    }

    pub fn name(&self) -> &str {
        match self {
            GameSource::Synthetic(spec) => &spec.name,
            GameSource::Remote { game_id } => game_id,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Seeds {
    /// Run `i` uses `base + i`.
    Base(u64),
    List(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub games: Vec<GameSource>,
    pub agents: Vec<AgentKind>,
    pub budget: u64,
    /// Per-agent budgets replacing `budget`.
    pub budget_overrides: BTreeMap<AgentKind, u64>,
    pub runs: usize,
    pub seeds: Seeds,
    /// Soft per-episode limit, checked between steps.
    pub wall_clock: Option<Duration>,
    pub paper_faithful: bool,
    pub trace: bool,
    pub dump_graphs: bool,
    /// Settings for remote games; `game_id` is replaced per game.
    pub api: Option<ApiConfig>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(games: Vec<GameSource>, agents: Vec<AgentKind>) -> Self {
        RunConfig {
            games,
            agents,
            budget: DEFAULT_BUDGET,
            budget_overrides: BTreeMap::new(),
            runs: DEFAULT_RUNS,
            seeds: Seeds::Base(0),
            wall_clock: None,
            paper_faithful: false,
            trace: false,
            dump_graphs: false,
            api: None,
            output_dir: None,
        }
    }

    pub fn budget_for(&self, agent: AgentKind) -> u64 {
        self.budget_overrides.get(&agent).copied().unwrap_or(self.budget)
    }

    pub fn seed(&self, run: usize) -> u64 {
        match &self.seeds {
            Seeds::Base(base) => base.wrapping_add(run as u64),
            Seeds::List(list) => list[run],
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.games.is_empty() {
            return bad("no games selected".into());
        }
        if self.agents.is_empty() {
            return bad("no agents selected".into());
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        for agent in &self.agents {
            let b = self.budget_for(*agent);
            if b == 0 || b > MAX_BUDGET {
                return bad(format!("budget {b} for {agent} must be in 1..={MAX_BUDGET}"));
            }
        }
        if let Seeds::List(list) = &self.seeds {
            if list.len() != self.runs {
                return bad(format!("{} seeds given for {} runs", list.len(), self.runs));
            }
        }
        let remote = self.games.iter().any(|g| matches!(g, GameSource::Remote { .. }));
        if remote && self.api.is_none() {
            return bad("remote games need API settings".into());
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Raw outcome of one episode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub game: String,
    pub agent: AgentKind,
    pub run: usize,
    pub seed: u64,
    pub budget: u64,
    pub level_count: Option<usize>,
    pub levels_completed: usize,
    /// Steps spent on each completed level, in level order.
    pub level_steps: Vec<u64>,
    pub steps_taken: u64,
    pub game_won: bool,
    pub stuck: bool,
    pub timed_out: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
    #[serde(skip)]
    pub graphs: Vec<GraphDump>,
}

impl EpisodeRecord {
    /// Cumulative step count at which each level was completed.
    pub fn completion_steps(&self) -> Vec<u64> {
        self.level_steps
            .iter()
            .scan(0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct MatrixResult {
    pub records: Vec<EpisodeRecord>,
    pub table: ResultTable,
}

struct Job<'a> {
    game: &'a GameSource,
    agent: AgentKind,
    run: usize,
}

/// Runs every (game, agent, run) episode, in parallel, and aggregates them.
/// Episode failures are recorded in place and do not stop the matrix.
pub fn run_matrix(config: &RunConfig) -> Result<MatrixResult, HarnessError> {
    config.validate()?;
    let pacer = config.api.as_ref().map(|api| Pacer::new(api.rate_limit));
    let mut jobs = Vec::new();
    for game in &config.games {
        for &agent in &config.agents {
            for run in 0..config.runs {
                jobs.push(Job { game, agent, run });
            }
        }
    }
    let records: Vec<EpisodeRecord> = jobs
        .par_iter()
        .map(|job| run_job(config, job, pacer.as_ref()))
        .collect();
    let table = ResultTable::from_records(&records, config);
    let result = MatrixResult { records, table };
    if let Some(dir) = &config.output_dir {
        write_outputs(dir, &result, config)?;
    }
    Ok(result)
}

fn run_job(config: &RunConfig, job: &Job<'_>, pacer: Option<&Pacer>) -> EpisodeRecord {
    let seed = config.seed(job.run);
    let budget = config.budget_for(job.agent);
    let opts = EpisodeOptions {
        paper_faithful: config.paper_faithful,
        trace: config.trace,
        keep_graphs: config.dump_graphs,
        wall_clock: config.wall_clock,
    };
    let mut record = EpisodeRecord {
        game: job.game.name().to_string(),
        agent: job.agent,
        run: job.run,
        seed,
        budget,
        level_count: None,
        levels_completed: 0,
        level_steps: Vec::new(),
        steps_taken: 0,
        game_won: false,
        stuck: false,
        timed_out: false,
        error: None,
        trace: Vec::new(),
        graphs: Vec::new(),
    };
    let mut env: Box<dyn Environment + Send> = match job.game {
        GameSource::Synthetic(spec) => match SyntheticEnv::new(spec.clone()) {
            Ok(env) => Box::new(env),
            Err(e) => {
                record.error = Some(e.to_string());
                return record;
            }
        },
        GameSource::Remote { game_id } => {
            let mut api = config.api.clone().expect("validated");
            api.game_id = game_id.clone();
            match ArcEnv::open_with_pacer(api, pacer.expect("created with api").clone()) {
                Ok(env) => Box::new(env),
                Err(e) => {
                    record.error = Some(e.to_string());
                    return record;
                }
            }
        }
    };
    match run_episode(&mut env, job.agent, budget, seed, &opts) {
        Ok(st) => {
            record.level_count = env.level_count();
            record.levels_completed = st.levels_completed;
            record.level_steps = st.per_level_steps.iter().map(|&(_, s)| s).collect();
            record.steps_taken = st.steps_taken;
            record.game_won = st.game_won;
            record.stuck = st.stuck;
            record.timed_out = st.timed_out;
            record.trace = st.trace;
            record.graphs = st.graphs;
            info!(
                "{} {} run {}: {} levels in {} steps",
                record.game, record.agent, record.run, record.levels_completed, record.steps_taken
            );
        }
        Err(e) => {
            warn!("{} {} run {} failed: {e}", record.game, record.agent, record.run);
            record.level_count = env.level_count();
            record.error = Some(e.to_string());
        }
    }
    record
}
