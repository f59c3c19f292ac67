use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use super::table::fmt_num;
use super::{median, EpisodeRecord, MatrixResult, RunConfig};

const CURVE_POINTS: u32 = 40;

/// Log-spaced step counts from 1 to `budget`, both included.
pub fn curve_grid(budget: u64) -> Vec<u64> {
    let top = (budget.max(1) as f64).ln();
    let mut grid: Vec<u64> = (0..CURVE_POINTS)
        .map(|i| (top * i as f64 / (CURVE_POINTS - 1) as f64).exp().round() as u64)
        .collect();
    grid.push(budget.max(1));
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Levels solved by `step`, summarized over runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub game: String,
    pub agent: String,
    pub step: u64,
    pub median: f64,
    pub min: usize,
    pub max: usize,
}

fn curves(result: &MatrixResult, config: &RunConfig) -> Vec<CurvePoint> {
    let records = &result.records;
    let mut points = Vec::new();
    let mut push = |game: &str, agent: &str, runs: &[Vec<u64>], budget: u64| {
        for step in curve_grid(budget) {
            let solved: Vec<usize> = runs.iter().map(|c| c.iter().filter(|&&s| s <= step).count()).collect();
            let as_f: Vec<f64> = solved.iter().map(|&n| n as f64).collect();
            points.push(CurvePoint {
                game: game.to_string(),
                agent: agent.to_string(),
                step,
                median: median(&as_f).unwrap_or(0.0),
                min: solved.iter().min().copied().unwrap_or(0),
                max: solved.iter().max().copied().unwrap_or(0),
            });
        }
    };
    for &agent in &config.agents {
        let budget = config.budget_for(agent);
        for game in &result.table.games {
            let runs: Vec<Vec<u64>> = sorted(records, game, agent).iter().map(|r| r.completion_steps()).collect();
            push(game, agent.name(), &runs, budget);
        }
        // all games together: per run, every completion on any game counts
        let all: Vec<Vec<u64>> = (0..config.runs)
            .map(|run| {
                records
                    .iter()
                    .filter(|r| r.agent == agent && r.run == run)
                    .flat_map(|r| r.completion_steps())
                    .collect()
            })
            .collect();
        push("all", agent.name(), &all, budget);
    }
    points
}

fn sorted<'a>(records: &'a [EpisodeRecord], game: &str, agent: crate::agent::AgentKind) -> Vec<&'a EpisodeRecord> {
    let mut v: Vec<_> = records.iter().filter(|r| r.game == game && r.agent == agent).collect();
    v.sort_by_key(|r| r.run);
    v
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn csv_error(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// Writes `results.csv`, `levels.csv`, `results.json`, `results.md`,
/// `curves.csv`, and any collected traces and graph dumps.
pub fn write_outputs(dir: &Path, result: &MatrixResult, config: &RunConfig) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let table = &result.table;

    let mut w = csv::Writer::from_path(dir.join("results.csv")).map_err(csv_error)?;
    w.write_record([
        "game", "agent", "level", "stp", "median_steps", "min_steps", "max_steps", "sr", "solved_runs", "runs",
    ])
    .map_err(csv_error)?;
    for row in &table.rows {
        for l in &row.levels {
            let opt = |v: Option<String>| v.unwrap_or_default();
            w.write_record([
                row.game.clone(),
                row.agent.name().to_string(),
                l.level.to_string(),
                l.steps_cell(),
                opt(l.median_steps.map(fmt_num)),
                opt(l.min_steps.map(|v| v.to_string())),
                opt(l.max_steps.map(|v| v.to_string())),
                l.rate_cell(),
                l.solved_runs.to_string(),
                l.runs.to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("levels.csv")).map_err(csv_error)?;
    w.write_record(["game", "agent", "run", "seed", "levels_completed", "steps_taken", "level_steps", "status"])
        .map_err(csv_error)?;
    for game in &table.games {
        for &agent in &table.agents {
            for r in sorted(&result.records, game, agent) {
                let steps: Vec<String> = r.level_steps.iter().map(|s| s.to_string()).collect();
                let status = match (&r.error, r.game_won, r.stuck, r.timed_out) {
                    (Some(_), ..) => "failed",
                    (None, true, ..) => "won",
                    (None, _, true, _) => "stuck",
                    (None, _, _, true) => "timed_out",
                    _ => "budget",
                };
                w.write_record([
                    r.game.clone(),
                    agent.name().to_string(),
                    r.run.to_string(),
                    r.seed.to_string(),
                    r.levels_completed.to_string(),
                    r.steps_taken.to_string(),
                    steps.join(";"),
                    status.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("curves.csv")).map_err(csv_error)?;
    for p in curves(result, config) {
        w.serialize(p).map_err(csv_error)?;
    }
    w.flush()?;

    #[derive(Serialize)]
    struct Json<'a> {
        table: &'a super::ResultTable,
        records: &'a [EpisodeRecord],
    }
    let json = serde_json::to_string_pretty(&Json {
        table,
        records: &result.records,
    })
    .map_err(std::io::Error::other)?;
    fs::write(dir.join("results.json"), json + "\n")?;
    fs::write(dir.join("results.md"), markdown(result))?;

    for r in &result.records {
        let stem = format!("{}-{}-{}", file_stem(&r.game), r.agent.name(), r.run);
        if config.trace {
            let mut f = std::io::BufWriter::new(fs::File::create(dir.join(format!("trace-{stem}.jsonl")))?);
            for t in &r.trace {
                writeln!(f, "{}", t.to_json_line())?;
            }
            f.flush()?;
        }
        if config.dump_graphs && !r.graphs.is_empty() {
            let json = serde_json::to_string(&r.graphs).map_err(std::io::Error::other)?;
            fs::write(dir.join(format!("graph-{stem}.json")), json)?;
        }
    }
    Ok(())
}

fn markdown(result: &MatrixResult) -> String {
    let table = &result.table;
    let mut md = String::new();
    let _ = writeln!(md, "# Results\n");
    let _ = writeln!(md, "Budget {} steps, {} runs per cell.\n", table.budget, table.runs);

    let _ = writeln!(md, "## Levels solved (median [min;max])\n");
    let _ = write!(md, "| agent |");
    for g in &table.games {
        let _ = write!(md, " {g} |");
    }
    let _ = writeln!(md, " total |");
    let _ = writeln!(md, "|---|{}---|", "---|".repeat(table.games.len()));
    for &agent in &table.agents {
        let _ = write!(md, "| {agent} |");
        for g in &table.games {
            match table.summary(g, agent) {
                Some(s) => {
                    let _ = write!(md, " {} [{};{}] |", fmt_num(s.median_levels), s.min_levels, s.max_levels);
                }
                None => md.push_str(" - |"),
            }
        }
        let total = table.aggregate_for(agent).map_or(0.0, |a| a.total_median_levels);
        let _ = writeln!(md, " {} |", fmt_num(total));
    }

    for g in &table.games {
        let _ = writeln!(md, "\n## {g}\n");
        let _ = write!(md, "| level |");
        for agent in &table.agents {
            let _ = write!(md, " {agent} Stp | SR |");
        }
        let _ = writeln!(md);
        let _ = writeln!(md, "|---|{}", "---|---|".repeat(table.agents.len()));
        for level in 0..table.level_columns {
            let _ = write!(md, "| {} |", level + 1);
            for &agent in &table.agents {
                match table.summary(g, agent).and_then(|s| s.levels.get(level)) {
                    Some(l) => {
                        let _ = write!(md, " {} | {} |", l.steps_cell(), l.rate_cell());
                    }
                    None => md.push_str(" - | - |"),
                }
            }
            let _ = writeln!(md);
        }
        let failed: usize = table.rows.iter().filter(|r| &r.game == g).map(|r| r.failed_runs).sum();
        if failed > 0 {
            let _ = writeln!(md, "\n{failed} run(s) failed; see results.json.");
        }
    }
    md
}
