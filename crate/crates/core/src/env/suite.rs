//! Built-in games, one per mechanic family: movement with keys and doors,
//! button sequences among decoys, movement combined with buttons, and a
//! reset trap.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::spec::{GameSpec, LevelSpec};
use crate::action::ActionScheme;

pub const BUILTIN_NAMES: [&str; 4] = ["maze-arrows", "buttons-click", "combo", "counter-trap"];

pub fn builtin_suite() -> Vec<GameSpec> {
    vec![maze_arrows(), buttons_click(), combo(), counter_trap()]
}

pub fn builtin_game(name: &str) -> Option<GameSpec> {
    builtin_suite().into_iter().find(|g| g.name == name)
}

fn level(cell: usize, layout: &[&str], sequence: &str, step_limit: Option<u32>) -> LevelSpec {
    LevelSpec {
        cell,
        layout: layout.iter().map(|s| s.to_string()).collect(),
        sequence: sequence.to_string(),
        step_limit,
    }
}

fn maze_arrows() -> GameSpec {
    // (cells per side, key and door, step limit)
    let plan = [(3, false, 60), (4, false, 90), (4, true, 120), (5, true, 160), (6, true, 220)];
    GameSpec {
        name: "maze-arrows".into(),
        scheme: ActionScheme::Arrows,
        step_limit: 100,
        levels: plan
            .iter()
            .enumerate()
            .map(|(i, &(n, key, limit))| LevelSpec {
                cell: 4,
                layout: generate_maze(n, key, 0x3A2E_0000 + i as u64),
                sequence: String::new(),
                step_limit: Some(limit),
            })
            .collect(),
    }
}

/// Perfect maze on an `n` x `n` cell grid, drawn as `2n + 1` tiles per side.
/// The player starts in the top-left cell and the exit sits in the dead end
/// farthest from it; with `key`, a door guards the exit and a key waits in the
/// next-farthest dead end.
pub(crate) fn generate_maze(n: usize, key: bool, seed: u64) -> Vec<String> {
    let size = 2 * n + 1;
    let mut grid = vec![vec!['#'; size]; size];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visited = vec![vec![false; n]; n];
    let mut stack = vec![(0usize, 0usize)];
    visited[0][0] = true;
    grid[1][1] = '.';
    while let Some(&(r, c)) = stack.last() {
        let mut next: Vec<(usize, usize)> = [(0isize, 1isize), (1, 0), (0, -1), (-1, 0)]
            .iter()
            .map(|&(dr, dc)| (r as isize + dr, c as isize + dc))
            .filter(|&(nr, nc)| nr >= 0 && nc >= 0 && (nr as usize) < n && (nc as usize) < n)
            .map(|(nr, nc)| (nr as usize, nc as usize))
            .filter(|&(nr, nc)| !visited[nr][nc])
            .collect();
        if next.is_empty() {
            stack.pop();
            continue;
        }
        next.shuffle(&mut rng);
        let (nr, nc) = next[0];
        visited[nr][nc] = true;
        grid[2 * nr + 1][2 * nc + 1] = '.';
        grid[r + nr + 1][c + nc + 1] = '.';
        stack.push((nr, nc));
    }

    // breadth-first distances over cells from the start
    let mut dist = vec![vec![usize::MAX; n]; n];
    let mut queue = std::collections::VecDeque::from([(0usize, 0usize)]);
    dist[0][0] = 0;
    while let Some((r, c)) = queue.pop_front() {
        for (nr, nc, wr, wc) in neighbours(n, r, c) {
            if grid[wr][wc] == '.' && dist[nr][nc] == usize::MAX {
                dist[nr][nc] = dist[r][c] + 1;
                queue.push_back((nr, nc));
            }
        }
    }
    let open = |r: usize, c: usize| neighbours(n, r, c).filter(|&(_, _, wr, wc)| grid[wr][wc] == '.').count();
    let mut dead_ends: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| (r, c) != (0, 0) && open(r, c) == 1)
        .collect();
    dead_ends.sort_by_key(|&(r, c)| (std::cmp::Reverse(dist[r][c]), r, c));

    let (er, ec) = dead_ends[0];
    grid[2 * er + 1][2 * ec + 1] = 'E';
    if key {
        let (_, _, wr, wc) = neighbours(n, er, ec)
            .find(|&(_, _, wr, wc)| grid[wr][wc] == '.')
            .expect("a dead end has one opening");
        grid[wr][wc] = 'D';
        let (kr, kc) = dead_ends.get(1).copied().unwrap_or((0, n - 1));
        grid[2 * kr + 1][2 * kc + 1] = 'k';
    }
    grid[1][1] = 'P';
    grid.into_iter().map(|row| row.into_iter().collect()).collect()
}

/// Neighbouring cells with the wall tile between them.
fn neighbours(n: usize, r: usize, c: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    [(0isize, 1isize), (1, 0), (0, -1), (-1, 0)]
        .into_iter()
        .map(move |(dr, dc)| (r as isize + dr, c as isize + dc))
        .filter(move |&(nr, nc)| nr >= 0 && nc >= 0 && (nr as usize) < n && (nc as usize) < n)
        .map(move |(nr, nc)| {
            let (nr, nc) = (nr as usize, nc as usize);
            (nr, nc, r + nr + 1, c + nc + 1)
        })
}

fn buttons_click() -> GameSpec {
    GameSpec {
        name: "buttons-click".into(),
        scheme: ActionScheme::Clicks,
        step_limit: 60,
        levels: vec![
            level(
                6,
                &[
                    "..........",
                    ".a......b.",
                    "..........",
                    "..111111..",
                    "..111111..",
                    "..111111..",
                    "..111111..",
                    "..........",
                    "....c.....",
                    "..........",
                ],
                "bca",
                None,
            ),
            level(
                6,
                &[
                    "..........",
                    ".a..1...d.",
                    "..........",
                    "1.999999..",
                    "..999999.1",
                    "..999999..",
                    "..999999..",
                    ".b.......c",
                    "....1.....",
                    "..........",
                ],
                "dab",
                None,
            ),
            level(
                6,
                &[
                    "1111111111",
                    "1a..1...b1",
                    "1........1",
                    "1..9999..1",
                    "1..9999.e1",
                    "1c.9999..1",
                    "1..9999..1",
                    "1........1",
                    "1..d.1...1",
                    "1111111111",
                ],
                "ecbd",
                None,
            ),
            level(
                6,
                &[
                    "9999999999",
                    "9999999999",
                    "99a9999b99",
                    "9999999999",
                    "..........",
                    ".1.c..1.d.",
                    "..........",
                    "1....e...1",
                    "..........",
                    "..1....1..",
                ],
                "dbea",
                Some(80),
            ),
            level(
                6,
                &[
                    "a........b",
                    "..111111..",
                    "..1....1..",
                    "..1.ff.1..",
                    "..1....1..",
                    "..111111..",
                    "c........d",
                    "9999999999",
                    "9999e99999",
                    "9999999999",
                ],
                "fbdca",
                Some(90),
            ),
        ],
    }
}

fn combo() -> GameSpec {
    GameSpec {
        name: "combo".into(),
        scheme: ActionScheme::Combined,
        step_limit: 120,
        levels: vec![
            level(
                4,
                &[
                    "############....",
                    "#P.......#E#....",
                    "#........#G#.a..",
                    "#..........#....",
                    "#..........#....",
                    "############....",
                ],
                "a",
                None,
            ),
            level(
                4,
                &[
                    "############....",
                    "#E#.......P#....",
                    "#G#........#.a..",
                    "#..........#....",
                    "#...##.....#.b..",
                    "#...##.....#....",
                    "############....",
                ],
                "ba",
                None,
            ),
            level(
                4,
                &[
                    "#############...",
                    "#P...k#.....#...",
                    "#.....#.....#.a.",
                    "#.....D.....#...",
                    "#.....#.....#.b.",
                    "#######G#####...",
                    "#######E#####...",
                ],
                "ab",
                Some(160),
            ),
            level(
                4,
                &[
                    "##############..",
                    "#P.....#.....#..",
                    "#......#.....#c.",
                    "#..k...D.....#..",
                    "#......#.....#a.",
                    "#......#.....#..",
                    "##########G###b.",
                    "##########E#....",
                ],
                "cab",
                Some(200),
            ),
        ],
    }
}

fn counter_trap() -> GameSpec {
    GameSpec {
        name: "counter-trap".into(),
        scheme: ActionScheme::Clicks,
        step_limit: 40,
        levels: vec![
            level(
                6,
                &[
                    "..........",
                    "..a....b..",
                    "..........",
                    "..........",
                    "....T.....",
                    "..........",
                ],
                "ab",
                None,
            ),
            level(
                6,
                &[
                    "..........",
                    ".a..T...b.",
                    "..........",
                    "..1111....",
                    "..1111..c.",
                    "..........",
                ],
                "cab",
                None,
            ),
            level(
                6,
                &[
                    ".........",
                    ".a.....b.",
                    "....T....",
                    ".c.....d.",
                    ".........",
                ],
                "dbca",
                None,
            ),
        ],
    }
}
