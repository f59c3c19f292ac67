//! End-to-end acceptance checks. Runs without the libtest harness so that the
//! verdict for every criterion is printed, then exits non-zero if any failed.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use frontier_core::agent::{run_episode, AgentKind, EpisodeOptions, TraceRecord};
use frontier_core::client::mock::{MockFixture, MockServer};
use frontier_core::client::{ApiConfig, ArcEnv, MAX_RATE};
use frontier_core::env::{builtin_game, builtin_suite, palette, GameSpec, SyntheticEnv};
use frontier_core::frame::{detect_status_bar, process, segment_frame, Frame, PriorityTier, StateKey, TieredAction};
use frontier_core::graph::{Branch, GraphError, LevelGraph, Outcome};
use frontier_core::harness::{emit_trace_report, run_matrix, GameSource, RunConfig, Seeds};
use frontier_core::{ActionRef, ActionScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Allowed;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 ---------------------------------------------------------------------------

fn segmentation_oracle() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut total_segments = 0;
    for i in 0..100 {
        let w = rng.random_range(8..=64);
        let h = rng.random_range(8..=64);
        let n_colors = rng.random_range(2..=16);
        let mut palette: Vec<u8> = (0..16).collect();
        palette.sort_by_key(|_| rng.random::<u32>());
        let frame = common::blob_frame(&mut rng, w, h, &palette[..n_colors]);
        let oracle = common::flood_fill_labels(&frame);
        let segments = segment_frame(&frame);
        let mut ours = vec![usize::MAX; w * h];
        for (id, s) in segments.iter().enumerate() {
            ensure(s.area == s.pixels.len(), || format!("frame {i}: segment {id} area mismatch"))?;
            for &(r, c) in &s.pixels {
                let idx = r as usize * w + c as usize;
                ensure(ours[idx] == usize::MAX, || format!("frame {i}: pixel ({r}, {c}) in two segments"))?;
                ensure(frame.get(r as usize, c as usize) == s.color, || format!("frame {i}: color mismatch"))?;
                ours[idx] = id;
            }
        }
        ensure(ours.iter().all(|&l| l != usize::MAX), || format!("frame {i}: uncovered pixel"))?;
        // same partition: the label maps are a bijection
        let mut fwd = HashMap::new();
        let mut back = HashMap::new();
        for (&a, &b) in oracle.iter().zip(&ours) {
            ensure(*fwd.entry(a).or_insert(b) == b && *back.entry(b).or_insert(a) == a, || {
                format!("frame {i} ({w}x{h}, {n_colors} colors): partitions differ")
            })?;
        }
        total_segments += segments.len();
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("100 frames, {total_segments} segments, {elapsed:.2?}"))
}

// 2 ---------------------------------------------------------------------------

/// Scene of blobs above a separator row and a two-row band of `ticks` ticks.
fn banded_frame(rng: &mut impl Rng, scene: &Frame, ticks: usize) -> Frame {
    let mut cells = scene.cells().to_vec();
    cells.resize(64 * 64, palette::BAND);
    let mut f = Frame::from_cells(64, 64, cells).unwrap();
    f.fill_rect(61, 0, 1, 64, palette::SEPARATOR);
    f.fill_rect(62, 0, 2, 64, palette::BAND);
    for k in 0..ticks {
        f.set(62, 2 * k + 1, palette::TICK);
    }
    if rng.random_bool(0.5) {
        f.set(63, 62, palette::LEVEL_DOT);
    }
    f
}

fn mask_idempotence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let scene_colors: Vec<u8> = (0..16)
        .filter(|c| ![palette::BAND, palette::SEPARATOR, palette::TICK, palette::LEVEL_DOT].contains(c))
        .collect();
    for i in 0..50 {
        let scene = common::blob_frame(&mut rng, 64, 61, &scene_colors);
        let a = rng.random_range(3..=30);
        let mut b = rng.random_range(3..=30);
        if b == a {
            b = if a == 30 { 3 } else { a + 1 };
        }
        let fa = banded_frame(&mut rng.clone(), &scene, a);
        let fb = banded_frame(&mut rng, &scene, b);
        let (ma, mb) = (
            detect_status_bar(&segment_frame(&fa), &fa),
            detect_status_bar(&segment_frame(&fb), &fb),
        );
        for (r, c) in (0..64).flat_map(|r| (0..64).map(move |c| (r, c))) {
            if fa.get(r, c) != fb.get(r, c) {
                ensure(ma.contains(r, c) && mb.contains(r, c), || {
                    format!("pair {i}: differing pixel ({r}, {c}) outside the detected band")
                })?;
            }
        }
        let (ka, kb) = (process(&fa, ActionScheme::Clicks).key, process(&fb, ActionScheme::Clicks).key);
        ensure(ka == kb, || format!("pair {i}: {a} vs {b} ticks hash to {ka} and {kb}"))?;
    }

    let mut seen: HashMap<StateKey, (Frame, Vec<bool>)> = HashMap::new();
    let mut collisions = 0;
    let mut distinct = 0;
    let all: Vec<u8> = (0..16).collect();
    while distinct < 1000 {
        let f = common::blob_frame(&mut rng, 64, 64, &all);
        let pf = process(&f, ActionScheme::Clicks);
        let masked: Vec<bool> = (0..64 * 64).map(|i| pf.mask.contains(i / 64, i % 64)).collect();
        let visible = |frame: &Frame, m: &[bool]| -> Vec<Option<u8>> {
            frame.cells().iter().zip(m).map(|(&c, &hidden)| (!hidden).then_some(c)).collect()
        };
        match seen.get(&pf.key) {
            Some((g, gm)) if visible(g, gm) == visible(&f, &masked) => continue,
            Some(_) => collisions += 1,
            None => {
                seen.insert(pf.key, (f, masked));
            }
        }
        distinct += 1;
    }
    ensure(collisions == 0, || format!("{collisions} collisions among 1000 frames"))?;
    Ok("50 band pairs equal, 0 collisions in 1000 frames".into())
}

// 3 ---------------------------------------------------------------------------

fn frontier_oracle() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut checked, mut finite) = (0, 0);
    for i in 0..50 {
        let tested = rng.random_range(0.3..0.95);
        let mut g = common::random_graph(&mut rng, 200, 8, tested);
        let keys: Vec<StateKey> = g.nodes().map(|n| n.key).collect();
        for t in PriorityTier::all() {
            let oracle = common::dijkstra_frontier(&g, t);
            for &k in &keys {
                let ours = g.frontier_distance(k, t);
                ensure(ours == oracle[&k], || {
                    format!("graph {i}, node {k}, tier {}: {ours:?} vs oracle {:?}", t.value(), oracle[&k])
                })?;
                checked += 1;
                finite += usize::from(matches!(ours, Some(d) if d > 0));
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("50 graphs, {checked} (node, tier) distances ({finite} positive), {elapsed:.2?}"))
}

// 4 ---------------------------------------------------------------------------

fn click(i: usize) -> ActionRef {
    ActionRef::click(i, 0)
}

fn tiers(list: &[u8]) -> Vec<TieredAction> {
    list.iter()
        .enumerate()
        .map(|(i, &t)| TieredAction {
            action: click(i),
            tier: PriorityTier::new(t).unwrap(),
        })
        .collect()
}

/// Graph over keys `0..n`: `actions[k]` lists the tiers of node `k`'s actions;
/// `outcomes` assigns `(node, action index, outcome)`.
fn build(actions: &[&[u8]], outcomes: &[(u64, usize, Outcome)]) -> LevelGraph {
    let mut g = LevelGraph::with_start_node(StateKey(0), &tiers(actions[0]), 11);
    for (k, a) in actions.iter().enumerate().skip(1) {
        g.insert_node(StateKey(k as u64), &tiers(a));
    }
    for &(k, i, o) in outcomes {
        g.record_transition(StateKey(k), &click(i), o).unwrap();
    }
    g
}

fn to(k: u64) -> Outcome {
    Outcome::MovedTo(StateKey(k))
}

fn hand_built() -> Vec<(String, LevelGraph, StateKey, PriorityTier)> {
    let p = |t: u8| PriorityTier::new(t).unwrap();
    let mut out = Vec::new();
    // chains 0 -> 1 -> ... -> len, frontier at the end
    for len in 1..=10u64 {
        let acts: Vec<&[u8]> = (0..=len).map(|_| &[1u8][..]).collect();
        let edges: Vec<_> = (0..len).map(|k| (k, 0, to(k + 1))).collect();
        out.push((format!("chain {len}"), build(&acts, &edges), StateKey(0), p(1)));
    }
    // the only untested action sits at tier t, two hops away
    for t in 1..=5u8 {
        let last = [t];
        let g = build(&[&[1], &[1], &last], &[(0, 0, to(1)), (1, 0, to(2))]);
        out.push((format!("escalate to {t}"), g, StateKey(0), p(1)));
    }
    // k tied first hops toward frontiers at distance 2
    for k in 2..=6usize {
        let fan = vec![1u8; k];
        let mut acts: Vec<Vec<u8>> = vec![fan];
        acts.extend((0..k).map(|_| vec![1u8]));
        acts.push(vec![1]);
        let refs: Vec<&[u8]> = acts.iter().map(|a| a.as_slice()).collect();
        let target = k as u64 + 1;
        let mut edges: Vec<_> = (0..k).map(|i| (0, i, to(i as u64 + 1))).collect();
        edges.extend((0..k).map(|i| (i as u64 + 1, 0, to(target))));
        out.push((format!("{k}-way tie"), build(&refs, &edges), StateKey(0), p(1)));
    }
    // fully tested cycles
    for n in 1..=3u64 {
        let acts: Vec<&[u8]> = (0..n).map(|_| &[2u8][..]).collect();
        let edges: Vec<_> = (0..n)
            .map(|k| (k, 0, if n == 1 { Outcome::NoChange } else { to((k + 1) % n) }))
            .collect();
        out.push((format!("exhausted cycle {n}"), build(&acts, &edges), StateKey(0), p(1)));
    }
    // untested actions of the current state above the threshold
    for start in 1..=3u8 {
        let g = build(&[&[1, 2, 3, 5]], &[(0, 0, Outcome::NoChange)]);
        out.push((format!("local escalation from {start}"), g, StateKey(0), p(start)));
    }
    // a frontier behind a reset edge is unreachable
    let g = build(&[&[1, 1], &[1]], &[(0, 0, Outcome::CausedReset), (0, 1, Outcome::CompletedLevel)]);
    out.push(("frontier behind reset".into(), g, StateKey(0), p(1)));
    let g = build(&[&[1], &[1, 4]], &[(0, 0, to(1)), (1, 0, Outcome::CausedReset)]);
    out.push(("reset edge then tier 4".into(), g, StateKey(0), p(1)));
    // a raised threshold admits every tier up to it
    let g = build(&[&[1, 3, 4]], &[]);
    out.push(("threshold 3 mixes tiers".into(), g, StateKey(0), p(3)));
    let g = build(&[&[2], &[1], &[3]], &[(0, 0, to(1)), (1, 0, to(0))]);
    out.push(("nearer tier-3 frontier loses to tier-2 at threshold 2".into(), g, StateKey(1), p(2)));
    out
}

/// Checks repeated selections against the reference and returns which case
/// applied: 0 untested, 1 frontier, 2 exhausted; plus whether it escalated.
fn check_selection(
    name: &str,
    g: &mut LevelGraph,
    current: StateKey,
    threshold: PriorityTier,
) -> Result<(usize, bool), String> {
    let allowed = common::reference_allowed(g, current, threshold);
    for _ in 0..8 {
        match (g.select_action(current, threshold), &allowed) {
            (Ok(sel), Allowed::Pick { actions, threshold: p, branch, distance }) => {
                ensure(actions.contains(&sel.action), || format!("{name}: {} not allowed", sel.action))?;
                ensure(sel.threshold == *p, || {
                    format!("{name}: threshold {} vs {}", sel.threshold.value(), p.value())
                })?;
                ensure(sel.branch == *branch && sel.distance == *distance, || {
                    format!("{name}: {:?}/{} vs {branch:?}/{distance}", sel.branch, sel.distance)
                })?;
            }
            (Err(GraphError::Exhausted { .. }), Allowed::Exhausted) => {}
            (got, want) => return Err(format!("{name}: got {got:?}, expected {want:?}")),
        }
    }
    Ok(match allowed {
        Allowed::Pick { branch, threshold: p, .. } => (usize::from(branch == Branch::Frontier), p > threshold),
        Allowed::Exhausted => (2, true),
    })
}

fn selection_fidelity() -> Verdict {
    let fixtures = hand_built();
    ensure(fixtures.len() == 30, || format!("{} hand-built fixtures", fixtures.len()))?;
    let mut cases = [0usize; 3];
    let mut escalations = 0;
    for (name, mut g, current, threshold) in fixtures {
        let (case, escalated) = check_selection(&name, &mut g, current, threshold)?;
        cases[case] += 1;
        escalations += usize::from(escalated);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for i in 0..50 {
        let tested = rng.random_range(0.5..1.0);
        let mut g = common::random_graph(&mut rng, 50, 8, tested);
        let keys: Vec<StateKey> = g.nodes().map(|n| n.key).collect();
        for k in keys {
            let t = PriorityTier::new(rng.random_range(1..=5)).unwrap();
            let (case, escalated) = check_selection(&format!("random {i} at {k}"), &mut g, k, t)?;
            cases[case] += 1;
            escalations += usize::from(escalated);
            checked += 1;
        }
    }
    Ok(format!(
        "30 hand-built fixtures, {checked} random states; untested/frontier/exhausted {cases:?}, {escalations} escalations"
    ))
}

// 5 ---------------------------------------------------------------------------

/// Level `index` of `spec` with its exit walled in, so only exhaustive
/// coverage can end the episode. `None` for levels without an exit.
fn sealed_level(spec: &GameSpec, index: usize) -> Option<GameSpec> {
    let mut s = common::unlimited_level(spec, index);
    let mut grid: Vec<Vec<char>> = s.levels[0].layout.iter().map(|r| r.chars().collect()).collect();
    let exits: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|r| (0..grid[r].len()).map(move |c| (r, c)))
        .filter(|&(r, c)| grid[r][c] == 'E')
        .collect();
    if exits.is_empty() {
        return None;
    }
    for (r, c) in exits {
        let around = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
        for (nr, nc) in around {
            if let Some(ch) = grid.get_mut(nr).and_then(|row| row.get_mut(nc)) {
                if *ch != 'P' {
                    *ch = '#';
                }
            }
        }
    }
    s.levels[0].layout = grid.into_iter().map(|r| r.into_iter().collect()).collect();
    s.name = format!("{}-sealed", s.name);
    Some(s)
}

struct Coverage {
    steps: u64,
    bound: u64,
}

fn coverage_case(spec: &GameSpec, paper_faithful: bool) -> Result<Option<Coverage>, String> {
    let Some(space) = common::enumerate_level(spec, 5_000) else {
        return Ok(None);
    };
    let pairs = space.pairs();
    let bound = pairs as u64 * (space.diameter() as u64 + 1);
    let opts = EpisodeOptions {
        paper_faithful,
        ..Default::default()
    };
    let mut env = SyntheticEnv::new(spec.clone()).unwrap();
    let st = run_episode(&mut env, AgentKind::GraphExplorer, bound, 0, &opts).map_err(|e| format!("{}: {e}", spec.name))?;
    if st.levels_completed == 0 {
        let g = st.graph.as_ref().expect("unsolved level keeps its graph");
        let covered = g.tested_count();
        ensure(g.node_count() == space.nodes.len() && covered == pairs, || {
            format!(
                "{}: tested {covered}/{pairs} pairs over {}/{} states in {} steps (bound {bound})",
                spec.name,
                g.node_count(),
                space.nodes.len(),
                st.steps_taken
            )
        })?;
        ensure(st.stuck, || format!("{}: covered but still running", spec.name))?;
    }
    ensure(st.steps_taken <= bound, || format!("{}: {} steps > bound {bound}", spec.name, st.steps_taken))?;
    Ok(Some(Coverage {
        steps: st.steps_taken,
        bound,
    }))
}

fn coverage_guarantee() -> Verdict {
    let (mut solved, mut covered) = (0, 0);
    let mut skipped = Vec::new();
    let mut worst: f64 = 0.0;
    for game in builtin_suite() {
        for i in 0..game.levels.len() {
            let open = common::unlimited_level(&game, i);
            for (spec, sealed) in [(Some(open), false), (sealed_level(&game, i), true)] {
                let Some(spec) = spec else { continue };
                for pf in [false, true] {
                    match coverage_case(&spec, pf)? {
                        Some(c) => {
                            if sealed {
                                covered += 1;
                            } else {
                                solved += 1;
                            }
                            worst = worst.max(c.steps as f64 / c.bound as f64);
                        }
                        None => skipped.push(spec.name.clone()),
                    }
                }
            }
        }
    }
    skipped.dedup();
    ensure(solved + covered > 0, || "no enumerable level".into())?;
    Ok(format!(
        "{solved} level runs and {covered} sealed-level runs within bound (worst {:.1}% of it); not enumerable: {}",
        worst * 100.0,
        if skipped.is_empty() { "none".into() } else { skipped.join(", ") }
    ))
}

// 6 ---------------------------------------------------------------------------

fn reset_regression() -> Verdict {
    let spec = builtin_game("counter-trap").unwrap();
    let opts = EpisodeOptions {
        paper_faithful: true,
        trace: true,
        ..Default::default()
    };
    let mut details = Vec::new();
    for seed in 0..5u64 {
        let mut env = SyntheticEnv::new(spec.clone()).unwrap();
        let st = run_episode(&mut env, AgentKind::GraphExplorer, 4_000, seed, &opts).map_err(|e| e.to_string())?;
        let text: String = st.trace.iter().map(|r| r.to_json_line() + "\n").collect();
        let report = emit_trace_report(&text).map_err(|e| e.to_string())?;
        ensure(report.violations.is_empty(), || {
            format!("seed {seed}: retest violations at steps {:?}", report.violations)
        })?;
        for l in &report.levels {
            ensure(l.max_presses_of_reset_action <= 1, || {
                format!("seed {seed} level {}: reset action pressed {}x", l.level, l.max_presses_of_reset_action)
            })?;
        }
        details.push(format!("{}L/{}s", st.levels_completed, st.steps_taken));
    }
    Ok(format!("5 seeds, trap pressed at most once per level, 0 violations ({})", details.join(" ")))
}

// 7 and 8 ---------------------------------------------------------------------

fn ladder_config(out: &Path) -> RunConfig {
    let games = builtin_suite().into_iter().map(GameSource::Synthetic).collect();
    let mut cfg = RunConfig::new(games, AgentKind::LADDER.to_vec());
    cfg.budget = 4_000;
    cfg.runs = 5;
    cfg.seeds = Seeds::Base(0);
    cfg.output_dir = Some(out.to_path_buf());
    cfg
}

fn ablation_ladder(out: &Path) -> Verdict {
    let started = Instant::now();
    let result = run_matrix(&ladder_config(out)).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let table = &result.table;
    let mut lines = Vec::new();
    for game in &table.games {
        let medians: Vec<f64> = AgentKind::LADDER
            .iter()
            .map(|&a| table.summary(game, a).unwrap().median_levels)
            .collect();
        lines.push(format!("{game} {medians:?}"));
        ensure(medians.windows(2).all(|w| w[0] <= w[1]), || format!("{game}: medians {medians:?} not monotone"))?;
    }
    let totals: Vec<f64> = AgentKind::LADDER
        .iter()
        .map(|&a| table.aggregate_for(a).unwrap().total_median_levels)
        .collect();
    ensure(totals[3] > totals[..3].iter().cloned().fold(f64::MIN, f64::max), || {
        format!("aggregate {totals:?}: explorer not strictly greatest")
    })?;
    let failed: Vec<_> = result.records.iter().filter_map(|r| r.error.clone()).collect();
    ensure(failed.is_empty(), || format!("episode errors: {failed:?}"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{}; totals {totals:?}; {elapsed:.1?}", lines.join("; ")))
}

fn determinism(first: &Path, second: &Path) -> Verdict {
    if !first.join("results.csv").exists() {
        run_matrix(&ladder_config(first)).map_err(|e| e.to_string())?;
    }
    run_matrix(&ladder_config(second)).map_err(|e| e.to_string())?;
    let mut compared = Vec::new();
    for name in ["results.csv", "levels.csv", "curves.csv"] {
        let a = std::fs::read(first.join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(second.join(name)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name} differs between runs"))?;
        compared.push(format!("{name} ({} bytes)", a.len()));
    }
    Ok(format!("identical: {}", compared.join(", ")))
}

// 9 ---------------------------------------------------------------------------

fn actions(trace: &[TraceRecord]) -> Vec<ActionRef> {
    trace.iter().map(|r| r.action).collect()
}

fn max_in_window(stamps: &[Duration], window: Duration) -> usize {
    (0..stamps.len())
        .map(|i| stamps[i..].iter().take_while(|&&t| t - stamps[i] <= window).count())
        .max()
        .unwrap_or(0)
}

fn client_conformance() -> Verdict {
    let opts = EpisodeOptions {
        paper_faithful: true,
        trace: true,
        ..Default::default()
    };
    let mut notes = Vec::new();
    let mut worst = 0;

    // the committed recording
    let fixture = MockFixture::from_json(include_str!("fixtures/counter-trap.json")).map_err(|e| e.to_string())?;
    let server = MockServer::replay(fixture).map_err(|e| e.to_string())?;
    let mut remote = ArcEnv::open(ApiConfig::new(server.url(), "key", "counter-trap")).map_err(|e| e.to_string())?;
    let a = run_episode(&mut remote, AgentKind::GraphExplorer, 40, 3, &opts).map_err(|e| e.to_string())?;
    remote.close().map_err(|e| e.to_string())?;
    let mut local = SyntheticEnv::new(builtin_game("counter-trap").unwrap()).unwrap();
    let b = run_episode(&mut local, AgentKind::GraphExplorer, 40, 3, &opts).map_err(|e| e.to_string())?;
    ensure(actions(&a.trace) == actions(&b.trace), || "replayed fixture: action sequences differ".into())?;
    worst = worst.max(max_in_window(&server.request_times(), Duration::from_secs(1)));
    notes.push(format!("fixture {} actions", a.trace.len()));

    // live mock sessions of the other games
    for (name, budget, seed) in [("maze-arrows", 40, 7), ("buttons-click", 30, 8), ("combo", 25, 9)] {
        let spec = builtin_game(name).unwrap();
        let server = MockServer::synthetic(SyntheticEnv::new(spec.clone()).unwrap()).map_err(|e| e.to_string())?;
        let mut remote = ArcEnv::open(ApiConfig::new(server.url(), "key", name)).map_err(|e| e.to_string())?;
        let a = run_episode(&mut remote, AgentKind::GraphExplorer, budget, seed, &opts).map_err(|e| e.to_string())?;
        let mut local = SyntheticEnv::new(spec).unwrap();
        let b = run_episode(&mut local, AgentKind::GraphExplorer, budget, seed, &opts).map_err(|e| e.to_string())?;
        ensure(actions(&a.trace) == actions(&b.trace), || format!("{name}: action sequences differ"))?;
        worst = worst.max(max_in_window(&server.request_times(), Duration::from_secs(1)));
        notes.push(format!("{name} {} actions", a.trace.len()));
    }
    let cap = MAX_RATE as usize;
    ensure(worst <= cap, || format!("{worst} requests within one second"))?;
    Ok(format!("{}; at most {worst} requests per second", notes.join(", ")))
}

// -----------------------------------------------------------------------------

fn main() {
    let scratch = tempfile::tempdir().expect("temp dir");
    let (first, second) = (scratch.path().join("a"), scratch.path().join("b"));
    let criteria: Vec<Criterion> = vec![
        ("segmentation oracle", Box::new(segmentation_oracle)),
        ("mask idempotence", Box::new(mask_idempotence)),
        ("frontier oracle", Box::new(frontier_oracle)),
        ("selection fidelity", Box::new(selection_fidelity)),
        ("coverage guarantee", Box::new(coverage_guarantee)),
        ("reset-bug regression", Box::new(reset_regression)),
        ("ablation ladder", Box::new(|| ablation_ladder(&first))),
        ("determinism", Box::new(|| determinism(&first, &second))),
        ("client conformance", Box::new(client_conformance)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        ran += 1;
        let started = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {n} ({name}, {secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}, {secs:.1}s): {detail}");
            }
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
