use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use frontier_core::agent::{run_episode, AgentKind, EpisodeOptions};
use frontier_core::client::mock::MockServer;
use frontier_core::client::{ApiConfig, ArcEnv, API_KEY_ENV, DEFAULT_BASE_URL, MAX_RATE};
use frontier_core::env::{builtin_game, builtin_suite, GameSpec, SyntheticEnv, BUILTIN_NAMES};
use frontier_core::harness::{emit_trace_report, run_matrix, GameSource, RunConfig, Seeds, DEFAULT_BUDGET, DEFAULT_RUNS};

#[derive(Parser)]
#[command(name = "frontier", version, about = "Frontier-driven graph exploration for grid games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run agents on games and write result tables.
    Run(RunArgs),
    /// Summarize a JSON-lines trace; exits with 1 if it contains violations.
    Report { trace: PathBuf },
    /// List the built-in games.
    ListGames,
    /// Print a built-in game definition as JSON.
    DumpGame { name: String },
    /// Record a mock-server session of a built-in game as a replay fixture.
    MockRecord(MockRecordArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated built-in names, `all`, or remote game ids with --remote.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    games: Vec<String>,
    /// Additional game definitions in JSON.
    #[arg(long = "game-file")]
    game_files: Vec<PathBuf>,
    /// Comma-separated agent kinds, or `ladder` for all four.
    #[arg(long, value_delimiter = ',', default_value = "graph_explorer")]
    agent: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Per-agent budget, e.g. `random=10000`; repeatable.
    #[arg(long = "budget-for", value_parser = parse_override)]
    budget_for: Vec<(AgentKind, u64)>,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    runs: usize,
    /// Base seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit per-run seeds, overriding --seed.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    /// Treat --games as live game ids.
    #[arg(long)]
    remote: bool,
    #[arg(long, default_value = DEFAULT_BASE_URL)]
    api_url: String,
    /// Requests per second against the API.
    #[arg(long, default_value_t = MAX_RATE)]
    rate_limit: f64,
    #[arg(long, default_value_t = 3)]
    retries: u32,
    /// Soft per-episode wall-clock limit in seconds.
    #[arg(long)]
    wall_clock: Option<u64>,
    /// Record step-limit resets as action resets and disable the reset shortcut
    #[arg(long)]
    paper_faithful: bool,
    /// Write trace-*.jsonl for every episode.
    #[arg(long)]
    trace: bool,
    /// Write graph-*.json for every episode.
    #[arg(long)]
    dump_graph: bool,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct MockRecordArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value = "graph_explorer")]
    agent: String,
    #[arg(long, default_value_t = 100)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record step-limit resets as action resets and disable the reset shortcut
    #[arg(long)]
    paper_faithful: bool,
    #[arg(long)]
    out: PathBuf,
}

fn parse_override(s: &str) -> Result<(AgentKind, u64), String> {
    let (agent, budget) = s.split_once('=').ok_or("expected AGENT=STEPS")?;
    Ok((agent.parse()?, budget.parse().map_err(|e| format!("{e}"))?))
}

fn parse_agents(names: &[String]) -> Result<Vec<AgentKind>> {
    let mut agents = Vec::new();
    for name in names {
        if name == "ladder" {
            agents.extend(AgentKind::LADDER);
        } else {
            agents.push(name.parse().map_err(anyhow::Error::msg)?);
        }
    }
    agents.dedup();
    Ok(agents)
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let mut games = Vec::new();
    let mut api = None;
    if args.remote {
        let mut cfg = ApiConfig::from_env(&args.api_url, "")?;
        cfg.rate_limit = args.rate_limit;
        cfg.retries = args.retries;
        api = Some(cfg);
        games.extend(args.games.iter().map(|g| GameSource::Remote { game_id: g.clone() }));
    } else {
        for name in &args.games {
            if name == "all" {
                games.extend(builtin_suite().into_iter().map(GameSource::Synthetic));
            } else {
                let spec = builtin_game(name)
                    .with_context(|| format!("unknown game `{name}`; built-in games: {}", BUILTIN_NAMES.join(", ")))?;
                games.push(GameSource::Synthetic(spec));
            }
        }
    }
    for path in &args.game_files {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec = GameSpec::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
        games.push(GameSource::Synthetic(spec));
    }
    if args.remote && !args.game_files.is_empty() {
        bail!("--game-file cannot be combined with --remote");
    }

    let mut config = RunConfig::new(games, parse_agents(&args.agent)?);
    config.budget = args.budget;
    config.budget_overrides = args.budget_for.into_iter().collect();
    config.runs = args.runs;
    config.seeds = if args.seeds.is_empty() {
        Seeds::Base(args.seed)
    } else {
        config.runs = args.seeds.len();
        Seeds::List(args.seeds)
    };
    config.wall_clock = args.wall_clock.map(Duration::from_secs);
    config.paper_faithful = args.paper_faithful;
    config.trace = args.trace;
    config.dump_graphs = args.dump_graph;
    config.api = api;
    config.output_dir = Some(args.out.clone());

    let result = run_matrix(&config)?;
    print!("{}", std::fs::read_to_string(args.out.join("results.md"))?);
    let failed = result.records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        for r in result.records.iter().filter(|r| r.error.is_some()) {
            eprintln!("{} {} run {}: {}", r.game, r.agent, r.run, r.error.as_deref().unwrap_or_default());
        }
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn report(path: PathBuf) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let summary = emit_trace_report(&text)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if summary.violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} violation(s): tested actions re-selected as untested", summary.violations.len());
        Ok(ExitCode::from(1))
    }
}

fn mock_record(args: MockRecordArgs) -> Result<ExitCode> {
    let spec = builtin_game(&args.game).with_context(|| format!("unknown game `{}`", args.game))?;
    let kind: AgentKind = args.agent.parse().map_err(anyhow::Error::msg)?;
    let server = MockServer::synthetic(SyntheticEnv::new(spec.clone())?)?;
    let mut env = ArcEnv::open(ApiConfig::new(server.url(), "mock-key", &spec.name))?;
    let opts = EpisodeOptions {
        paper_faithful: args.paper_faithful,
        ..Default::default()
    };
    let st = run_episode(&mut env, kind, args.budget, args.seed, &opts)?;
    env.close()?;
    let fixture = server.fixture(&spec.name);
    std::fs::write(&args.out, fixture.to_json() + "\n").with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "recorded {} exchanges ({} steps, {} levels) to {}",
        fixture.exchanges.len(),
        st.steps_taken,
        st.levels_completed,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Report { trace } => report(trace),
        Command::ListGames => {
            for spec in builtin_suite() {
                println!("{:14} {:?}, {} levels", spec.name, spec.scheme, spec.levels.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DumpGame { name } => match builtin_game(&name) {
            Some(spec) => {
                println!("{}", spec.to_json());
                Ok(ExitCode::SUCCESS)
            }
            None => Err(anyhow::anyhow!("unknown game `{name}`")),
        },
        Command::MockRecord(args) => mock_record(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<frontier_core::client::ClientError>().is_some() {
                eprintln!("(the API key is read from {API_KEY_ENV})");
            }
            ExitCode::FAILURE
        }
    }
}
