use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::render::{FRAME_SIZE, SCENE_ROWS};
use crate::action::ActionScheme;

pub const MAX_LEVELS: usize = 10;
const MIN_CELL: usize = 3;

/// A game definition, as loaded from `--game-file` JSON.
///
/// Layout characters:
///
/// | char | tile |
/// |------|------|
/// | `.`  | floor |
/// | `#`  | wall |
/// | `P`  | player start (floor) |
/// | `E`  | exit: reaching it completes the level |
/// | `k`  | key, collected on entry |
/// | `D`  | door, passable once any key is held |
/// | `G`  | gate, passable once the button sequence is complete |
/// | `T`  | trap button: clicking it resets the level; hidden once the sequence has started |
/// | `a`-`f` | clickable buttons |
/// | `1`-`9` | inert decoration painted in that palette color |
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub name: String,
    pub scheme: ActionScheme,
    /// Steps per level before the level restarts.
    pub step_limit: u32,
    pub levels: Vec<LevelSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    /// Tile edge in pixels.
    pub cell: usize,
    pub layout: Vec<String>,
    /// Buttons to press in order, e.g. `"bca"`.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub sequence: String,
    /// Overrides the game-wide step limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_limit: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tile {
    Floor,
    Wall,
    Exit,
    Key,
    Door,
    Gate,
    Trap,
    Button(u8),
    Decor(u8),
}

impl Tile {
    fn parse(ch: char) -> Option<Tile> {
        Some(match ch {
            '.' | 'P' => Tile::Floor,
            '#' => Tile::Wall,
            'E' => Tile::Exit,
            'k' => Tile::Key,
            'D' => Tile::Door,
            'G' => Tile::Gate,
            'T' => Tile::Trap,
            'a'..='f' => Tile::Button(ch as u8 - b'a'),
            '1'..='9' => Tile::Decor(ch as u8 - b'0'),
            _ => return None,
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("game `{0}` must have between 1 and 10 levels")]
    LevelCount(String),
    #[error("level {level}: {reason}")]
    Level { level: usize, reason: String },
    #[error("step limit must be at least 1")]
    StepLimit,
    #[error("invalid game JSON: {0}")]
    Json(String),
}

/// A validated level, ready to simulate.
#[derive(Clone, Debug)]
pub(crate) struct CompiledLevel {
    pub cell: usize,
    pub rows: usize,
    pub cols: usize,
    pub tiles: Vec<Tile>,
    pub player_start: Option<(usize, usize)>,
    /// Key positions, in row-major order; their index is the key's bit.
    pub keys: Vec<(usize, usize)>,
    pub sequence: Vec<u8>,
    pub step_limit: u32,
}

impl CompiledLevel {
    pub fn tile(&self, r: usize, c: usize) -> Tile {
        self.tiles[r * self.cols + c]
    }

    pub fn key_index(&self, pos: (usize, usize)) -> Option<usize> {
        self.keys.iter().position(|&k| k == pos)
    }
}

impl GameSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let spec: GameSpec = serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
        spec.compile()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game specs always serialize")
    }

    /// Copy of this game restricted to level `index` alone.
    pub fn single_level(&self, index: usize) -> GameSpec {
        GameSpec {
            name: format!("{}#{}", self.name, index + 1),
            levels: vec![self.levels[index].clone()],
            ..self.clone()
        }
    }

    pub(crate) fn compile(&self) -> Result<Vec<CompiledLevel>, SpecError> {
        if self.levels.is_empty() || self.levels.len() > MAX_LEVELS {
            return Err(SpecError::LevelCount(self.name.clone()));
        }
        if self.step_limit == 0 {
            return Err(SpecError::StepLimit);
        }
        self.levels
            .iter()
            .enumerate()
            .map(|(i, level)| {
                compile_level(level, self.scheme, self.step_limit).map_err(|reason| SpecError::Level { level: i + 1, reason })
            })
            .collect()
    }
}

fn compile_level(level: &LevelSpec, scheme: ActionScheme, default_limit: u32) -> Result<CompiledLevel, String> {
    let rows = level.layout.len();
    let cols = level.layout.first().map(|r| r.chars().count()).unwrap_or(0);
    if rows == 0 || cols == 0 {
        return Err("empty layout".into());
    }
    if level.cell < MIN_CELL {
        return Err(format!("cell size must be at least {MIN_CELL} pixels"));
    }
    if rows * level.cell > SCENE_ROWS || cols * level.cell > FRAME_SIZE {
        return Err(format!(
            "{rows}x{cols} tiles of {} px exceed the {SCENE_ROWS}x{FRAME_SIZE} scene",
            level.cell
        ));
    }
    let mut tiles = Vec::with_capacity(rows * cols);
    let mut player_start = None;
    let mut keys = Vec::new();
    for (r, line) in level.layout.iter().enumerate() {
        if line.chars().count() != cols {
            return Err(format!("layout row {r} is not {cols} tiles wide"));
        }
        for (c, ch) in line.chars().enumerate() {
            let tile = Tile::parse(ch).ok_or_else(|| format!("unknown tile `{ch}` at ({r}, {c})"))?;
            if ch == 'P' {
                if player_start.is_some() {
                    return Err("more than one player start".into());
                }
                player_start = Some((r, c));
            }
            if tile == Tile::Key {
                keys.push((r, c));
            }
            tiles.push(tile);
        }
    }
    let mut sequence = Vec::new();
    for ch in level.sequence.chars() {
        let Some(Tile::Button(id)) = Tile::parse(ch) else {
            return Err(format!("sequence entry `{ch}` is not a button"));
        };
        if !tiles.contains(&Tile::Button(id)) {
            return Err(format!("sequence button `{ch}` does not appear in the layout"));
        }
        sequence.push(id);
    }
    let buttons = tiles.iter().any(|t| matches!(t, Tile::Button(_) | Tile::Trap));
    let exit = tiles.contains(&Tile::Exit);
    match (player_start, scheme) {
        (None, ActionScheme::Arrows) => return Err("arrow games need a player start".into()),
        (Some(_), _) if !exit => return Err("a level with a player needs an exit".into()),
        (None, _) if sequence.is_empty() => return Err("a level without a player needs a button sequence".into()),
        _ => {}
    }
    if scheme == ActionScheme::Arrows && buttons {
        return Err("arrow games cannot contain buttons".into());
    }
    let step_limit = level.step_limit.unwrap_or(default_limit);
    if step_limit == 0 {
        return Err("step limit must be at least 1".into());
    }
    Ok(CompiledLevel {
        cell: level.cell,
        rows,
        cols,
        tiles,
        player_start,
        keys,
        sequence,
        step_limit,
    })
}
