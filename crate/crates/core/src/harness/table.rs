use serde::{Deserialize, Serialize};

use super::{EpisodeRecord, RunConfig};
use crate::agent::AgentKind;

/// Median of `values`, averaging the two middle values for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

/// Steps-to-solve statistics of one level over the runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    /// 1-based.
    pub level: usize,
    /// False when the game has fewer levels.
    pub exists: bool,
    pub runs: usize,
    pub solved_runs: usize,
    pub solve_rate: f64,
    /// Over solving runs only.
    pub median_steps: Option<f64>,
    pub min_steps: Option<u64>,
    pub max_steps: Option<u64>,
}

impl LevelStats {
    /// `median [min;max]`, `NS` when never solved, `-` when absent.
    pub fn steps_cell(&self) -> String {
        if !self.exists {
            return "-".into();
        }
        match (self.median_steps, self.min_steps, self.max_steps) {
            (Some(m), Some(lo), Some(hi)) => format!("{} [{lo};{hi}]", fmt_num(m)),
            _ => "NS".into(),
        }
    }

    pub fn rate_cell(&self) -> String {
        if self.exists {
            fmt_num(self.solve_rate)
        } else {
            "-".into()
        }
    }
}

pub(crate) fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        let s = format!("{x:.3}");
        s.trim_end_matches('0').to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSummary {
    pub game: String,
    pub agent: AgentKind,
    pub level_count: Option<usize>,
    pub levels: Vec<LevelStats>,
    pub levels_per_run: Vec<usize>,
    pub median_levels: f64,
    pub min_levels: usize,
    pub max_levels: usize,
    pub failed_runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentAggregate {
    pub agent: AgentKind,
    /// Sum over games of the per-game median levels.
    pub total_median_levels: f64,
    /// Median over run indices of the levels solved across all games.
    pub median_total_levels: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub budget: u64,
    pub runs: usize,
    pub games: Vec<String>,
    pub agents: Vec<AgentKind>,
    /// Levels shown per game: the largest level count in the matrix.
    pub level_columns: usize,
    pub rows: Vec<GameSummary>,
    pub aggregate: Vec<AgentAggregate>,
}

impl ResultTable {
    pub fn from_records(records: &[EpisodeRecord], config: &RunConfig) -> Self {
        let games: Vec<String> = config.games.iter().map(|g| g.name().to_string()).collect();
        let level_count = |game: &str| -> Option<usize> {
            records
                .iter()
                .filter(|r| r.game == game)
                .filter_map(|r| r.level_count)
                .max()
        };
        let level_columns = games
            .iter()
            .map(|g| {
                level_count(g).unwrap_or_else(|| {
                    records
                        .iter()
                        .filter(|r| &r.game == g)
                        .map(|r| r.levels_completed + 1)
                        .max()
                        .unwrap_or(1)
                })
            })
            .max()
            .unwrap_or(0);

        let mut rows = Vec::new();
        for game in &games {
            let count = level_count(game);
            for &agent in &config.agents {
                let mut runs: Vec<&EpisodeRecord> =
                    records.iter().filter(|r| &r.game == game && r.agent == agent).collect();
                runs.sort_by_key(|r| r.run);
                let n = runs.len();
                let levels = (0..level_columns)
                    .map(|i| {
                        let exists = count.is_none_or(|c| i < c);
                        let solved: Vec<u64> = runs.iter().filter_map(|r| r.level_steps.get(i).copied()).collect();
                        let as_f: Vec<f64> = solved.iter().map(|&s| s as f64).collect();
                        LevelStats {
                            level: i + 1,
                            exists,
                            runs: n,
                            solved_runs: solved.len(),
                            solve_rate: if n == 0 { 0.0 } else { solved.len() as f64 / n as f64 },
                            median_steps: median(&as_f),
                            min_steps: solved.iter().min().copied(),
                            max_steps: solved.iter().max().copied(),
                        }
                    })
                    .collect();
                let per_run: Vec<usize> = runs.iter().map(|r| r.levels_completed).collect();
                let as_f: Vec<f64> = per_run.iter().map(|&l| l as f64).collect();
                rows.push(GameSummary {
                    game: game.clone(),
                    agent,
                    level_count: count,
                    levels,
                    median_levels: median(&as_f).unwrap_or(0.0),
                    min_levels: per_run.iter().min().copied().unwrap_or(0),
                    max_levels: per_run.iter().max().copied().unwrap_or(0),
                    levels_per_run: per_run,
                    failed_runs: runs.iter().filter(|r| r.error.is_some()).count(),
                });
            }
        }

        let aggregate = config
            .agents
            .iter()
            .map(|&agent| {
                let total_median_levels = rows.iter().filter(|r| r.agent == agent).map(|r| r.median_levels).sum();
                let totals: Vec<f64> = (0..config.runs)
                    .map(|run| {
                        records
                            .iter()
                            .filter(|r| r.agent == agent && r.run == run)
                            .map(|r| r.levels_completed as f64)
                            .sum()
                    })
                    .collect();
                AgentAggregate {
                    agent,
                    total_median_levels,
                    median_total_levels: median(&totals).unwrap_or(0.0),
                }
            })
            .collect();

        ResultTable {
            budget: config.budget,
            runs: config.runs,
            games,
            agents: config.agents.clone(),
            level_columns,
            rows,
            aggregate,
        }
    }

    pub fn summary(&self, game: &str, agent: AgentKind) -> Option<&GameSummary> {
        self.rows.iter().find(|r| r.game == game && r.agent == agent)
    }

    pub fn aggregate_for(&self, agent: AgentKind) -> Option<&AgentAggregate> {
        self.aggregate.iter().find(|a| a.agent == agent)
    }
}
