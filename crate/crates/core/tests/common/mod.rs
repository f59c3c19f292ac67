//! Reference implementations used as test oracles. Each one is written
//! independently of the library code it checks, favouring obviousness over
//! speed.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};

use frontier_core::env::{EnvSignal, Environment, GameSpec, SyntheticEnv};
use frontier_core::frame::{process, Frame, PriorityTier, StateKey, TieredAction};
use frontier_core::graph::{Branch, LevelGraph, Outcome};
use frontier_core::ActionRef;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Recursive 4-connected flood fill. Returns one label per pixel, row-major,
/// numbered in order of first appearance.
pub fn flood_fill_labels(frame: &Frame) -> Vec<usize> {
    fn fill(frame: &Frame, labels: &mut [Option<usize>], r: usize, c: usize, color: u8, label: usize) {
        let (w, h) = (frame.width(), frame.height());
        if labels[r * w + c].is_some() || frame.get(r, c) != color {
            return;
        }
        labels[r * w + c] = Some(label);
        if r > 0 {
            fill(frame, labels, r - 1, c, color, label);
        }
        if r + 1 < h {
            fill(frame, labels, r + 1, c, color, label);
        }
        if c > 0 {
            fill(frame, labels, r, c - 1, color, label);
        }
        if c + 1 < w {
            fill(frame, labels, r, c + 1, color, label);
        }
    }
    let (w, h) = (frame.width(), frame.height());
    let mut labels = vec![None; w * h];
    let mut next = 0;
    for r in 0..h {
        for c in 0..w {
            if labels[r * w + c].is_none() {
                fill(frame, &mut labels, r, c, frame.get(r, c), next);
                next += 1;
            }
        }
    }
    labels.into_iter().map(|l| l.expect("every pixel labelled")).collect()
}

/// Random frame of blobs: each pixel copies its left or upper neighbour with
/// some probability, otherwise draws one of `colors`.
pub fn blob_frame(rng: &mut impl Rng, width: usize, height: usize, colors: &[u8]) -> Frame {
    let mut cells = vec![0u8; width * height];
    for r in 0..height {
        for c in 0..width {
            let roll: f64 = rng.random();
            cells[r * width + c] = if c > 0 && roll < 0.35 {
                cells[r * width + c - 1]
            } else if r > 0 && roll < 0.7 {
                cells[(r - 1) * width + c]
            } else {
                *colors.choose(rng).unwrap()
            };
        }
    }
    Frame::from_cells(width, height, cells).unwrap()
}

/// Forward edges usable for planning: `moved_to` outcomes between distinct states.
fn planning_edges(graph: &LevelGraph) -> BTreeMap<StateKey, Vec<(ActionRef, StateKey)>> {
    graph
        .nodes()
        .map(|n| {
            let edges = n
                .actions
                .iter()
                .filter_map(|r| match r.outcome {
                    Some(Outcome::MovedTo(next)) if next != n.key => Some((r.action, next)),
                    _ => None,
                })
                .collect();
            (n.key, edges)
        })
        .collect()
}

fn is_frontier(graph: &LevelGraph, key: StateKey, tier: PriorityTier) -> bool {
    graph
        .node(key)
        .unwrap()
        .actions
        .iter()
        .any(|r| r.outcome.is_none() && r.priority <= tier)
}

/// Unit-weight Dijkstra from every node forward to the nearest frontier.
pub fn dijkstra_frontier(graph: &LevelGraph, tier: PriorityTier) -> BTreeMap<StateKey, Option<u32>> {
    let edges = planning_edges(graph);
    let mut out = BTreeMap::new();
    for &source in edges.keys() {
        let mut best: HashMap<StateKey, u32> = HashMap::from([(source, 0)]);
        let mut heap = BinaryHeap::from([Reverse((0u32, source))]);
        let mut found = None;
        while let Some(Reverse((d, key))) = heap.pop() {
            if best[&key] < d {
                continue;
            }
            if is_frontier(graph, key, tier) {
                found = Some(d);
                break;
            }
            for &(_, next) in &edges[&key] {
                if best.get(&next).is_none_or(|&b| d + 1 < b) {
                    best.insert(next, d + 1);
                    heap.push(Reverse((d + 1, next)));
                }
            }
        }
        out.insert(source, found);
    }
    out
}

/// What the hierarchical policy may return from `current` at `threshold`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Allowed {
    Pick {
        actions: BTreeSet<ActionRef>,
        threshold: PriorityTier,
        branch: Branch,
        distance: u32,
    },
    Exhausted,
}

/// Reference enumeration of the allowed selections.
pub fn reference_allowed(graph: &LevelGraph, current: StateKey, threshold: PriorityTier) -> Allowed {
    let edges = planning_edges(graph);
    let node = graph.node(current).unwrap();
    let mut p = threshold;
    loop {
        let untested: BTreeSet<ActionRef> = node
            .actions
            .iter()
            .filter(|r| r.outcome.is_none() && r.priority <= p)
            .map(|r| r.action)
            .collect();
        if !untested.is_empty() {
            return Allowed::Pick {
                actions: untested,
                threshold: p,
                branch: Branch::Untested,
                distance: 0,
            };
        }
        let dist = dijkstra_frontier(graph, p);
        if let Some(d) = dist[&current] {
            let actions = edges[&current]
                .iter()
                .filter(|&&(_, next)| dist[&next] == Some(d - 1))
                .map(|&(a, _)| a)
                .collect();
            return Allowed::Pick {
                actions,
                threshold: p,
                branch: Branch::Frontier,
                distance: d,
            };
        }
        match p.next() {
            Some(next) => p = next,
            None => return Allowed::Exhausted,
        }
    }
}

fn tier(rng: &mut impl Rng) -> PriorityTier {
    PriorityTier::new(rng.random_range(1..=5)).unwrap()
}

/// Random graph with up to `max_nodes` nodes and `max_actions` actions per
/// node. Roughly `tested` of the actions carry a random outcome.
pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, max_actions: usize, tested: f64) -> LevelGraph {
    let n = rng.random_range(1..=max_nodes);
    let keys: Vec<StateKey> = (0..n).map(|i| StateKey(1000 + i as u64 * 7)).collect();
    let actions: Vec<Vec<TieredAction>> = keys
        .iter()
        .map(|_| {
            let m = rng.random_range(0..=max_actions);
            (0..m)
                .map(|j| TieredAction {
                    action: ActionRef::click(j, rng.random_range(0..64)),
                    tier: tier(rng),
                })
                .collect()
        })
        .collect();
    let mut g = LevelGraph::with_start_node(keys[0], &actions[0], rng.random());
    for (k, a) in keys.iter().zip(&actions).skip(1) {
        g.insert_node(*k, a);
    }
    for (i, k) in keys.iter().enumerate() {
        let node_actions: Vec<ActionRef> = g.node(*k).unwrap().actions.iter().map(|r| r.action).collect();
        for a in node_actions {
            if !rng.random_bool(tested) {
                continue;
            }
            let outcome = match rng.random_range(0..10) {
                0..=5 => Outcome::MovedTo(keys[rng.random_range(0..n)]),
                6 | 7 => Outcome::NoChange,
                8 => Outcome::CausedReset,
                _ => Outcome::CompletedLevel,
            };
            let outcome = match outcome {
                Outcome::MovedTo(k2) if k2 == keys[i] => Outcome::NoChange,
                o => o,
            };
            g.record_transition(*k, &a, outcome).unwrap();
        }
    }
    g
}

/// Brute-force state space of a single-level game.
pub struct StateSpace {
    pub start: StateKey,
    /// Every reachable state with the actions the explorer would be offered.
    pub nodes: BTreeMap<StateKey, Vec<TieredAction>>,
    /// `(from, action) -> successor`; `None` when the action completes the level.
    pub transitions: BTreeMap<(StateKey, ActionRef), Option<StateKey>>,
    pub completable: bool,
}

impl StateSpace {
    pub fn pairs(&self) -> usize {
        self.nodes.values().map(|a| a.len()).sum()
    }

    /// Longest shortest path between two states, counting the requested
    /// `Reset` as an edge from every state to the start.
    pub fn diameter(&self) -> u32 {
        let mut adj: BTreeMap<StateKey, BTreeSet<StateKey>> = BTreeMap::new();
        for (&(from, _), &to) in &self.transitions {
            let entry = adj.entry(from).or_default();
            entry.insert(self.start);
            if let Some(to) = to {
                entry.insert(to);
            }
        }
        let mut diameter = 0;
        for &s in self.nodes.keys() {
            let mut dist = BTreeMap::from([(s, 0u32)]);
            let mut queue = VecDeque::from([s]);
            while let Some(k) = queue.pop_front() {
                for &n in adj.get(&k).into_iter().flatten() {
                    if !dist.contains_key(&n) {
                        dist.insert(n, dist[&k] + 1);
                        queue.push_back(n);
                    }
                }
            }
            diameter = diameter.max(dist.values().copied().max().unwrap_or(0));
        }
        diameter
    }
}

/// Breadth-first enumeration over cloned environments. Gives up once more
/// than `max_pairs` state-action pairs have been found.
pub fn enumerate_level(spec: &GameSpec, max_pairs: usize) -> Option<StateSpace> {
    assert_eq!(spec.levels.len(), 1, "enumerate one level at a time");
    let scheme = spec.scheme;
    let mut root = SyntheticEnv::new(spec.clone()).unwrap();
    let first = root.reset().unwrap();
    let start = process(&first, scheme).key;
    let mut nodes = BTreeMap::new();
    let mut transitions = BTreeMap::new();
    let mut completable = false;
    let mut pairs = 0;
    let mut queue = VecDeque::from([(start, root)]);
    nodes.insert(start, process(&first, scheme).actions);
    pairs += nodes[&start].len();
    while let Some((key, env)) = queue.pop_front() {
        for a in nodes[&key].clone() {
            let mut next_env = env.clone();
            let result = next_env.step(&a.action).unwrap();
            let next_key = match result.signal {
                Some(EnvSignal::LevelComplete | EnvSignal::GameWon) => {
                    completable = true;
                    None
                }
                Some(EnvSignal::LevelReset(_)) => Some(start),
                None => Some(process(&result.frame, scheme).key),
            };
            transitions.insert((key, a.action), next_key);
            if let Some(k) = next_key {
                if let std::collections::btree_map::Entry::Vacant(slot) = nodes.entry(k) {
                    let offered = process(&result.frame, scheme).actions;
                    pairs += offered.len();
                    if pairs > max_pairs {
                        return None;
                    }
                    slot.insert(offered);
                    queue.push_back((k, next_env));
                }
            }
        }
    }
    Some(StateSpace {
        start,
        nodes,
        transitions,
        completable,
    })
}

/// `spec` restricted to level `index`, with a step limit far beyond any test
/// budget so the counter never restarts the level.
pub fn unlimited_level(spec: &GameSpec, index: usize) -> GameSpec {
    let mut single = spec.single_level(index);
    single.step_limit = 100_000_000;
    single.levels[0].step_limit = None;
    single
}
