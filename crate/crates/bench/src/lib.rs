//! Inputs shared by the benchmarks.

use frontier_core::agent::{run_episode, AgentKind, EpisodeOptions};
use frontier_core::env::{builtin_game, Environment, SyntheticEnv};
use frontier_core::{Frame, LevelGraph};

/// The opening frame of every built-in game.
pub fn opening_frames() -> Vec<(String, Frame, frontier_core::ActionScheme)> {
    frontier_core::env::builtin_suite()
        .into_iter()
        .map(|spec| {
            let mut env = SyntheticEnv::new(spec.clone()).expect("built-in games are valid");
            (spec.name.clone(), env.reset().expect("fresh reset"), spec.scheme)
        })
        .collect()
}

/// The explorer's graph after `steps` steps on level `level` of `game`.
pub fn explored_graph(game: &str, level: usize, steps: u64) -> LevelGraph {
    let spec = builtin_game(game).expect("known game").single_level(level);
    let mut long = spec.clone();
    long.step_limit = 1_000_000;
    long.levels[0].step_limit = None;
    let mut env = SyntheticEnv::new(long).expect("valid level");
    let st = run_episode(&mut env, AgentKind::GraphExplorer, steps, 0, &EpisodeOptions::default()).expect("episode runs");
    st.graph.expect("level still open")
}
