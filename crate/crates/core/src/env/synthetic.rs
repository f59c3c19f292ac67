use super::render::{render, FRAME_SIZE};
use super::spec::{CompiledLevel, GameSpec, SpecError, Tile};
use super::{EnvError, EnvSignal, Environment, ResetCause, StepResult};
use crate::action::{ActionRef, ActionScheme};
use crate::frame::Frame;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameStatus {
    Playing,
    Win,
}

/// Mutable part of a level: everything that the frame shows apart from the counter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct PlayState {
    pub player: Option<(usize, usize)>,
    /// Bit `i` set once key `i` has been collected.
    pub keys: u64,
    /// Number of sequence buttons pressed correctly so far.
    pub progress: usize,
}

impl PlayState {
    fn initial(level: &CompiledLevel) -> Self {
        PlayState {
            player: level.player_start,
            keys: 0,
            progress: 0,
        }
    }

    pub fn holds_key_at(&self, level: &CompiledLevel, pos: (usize, usize)) -> bool {
        level.key_index(pos).is_some_and(|i| self.keys & (1 << i) != 0)
    }
}

enum Effect {
    None,
    Won,
    Trapped,
}

/// Local simulator for a [`GameSpec`].
#[derive(Clone, Debug)]
pub struct SyntheticEnv {
    spec: GameSpec,
    levels: Vec<CompiledLevel>,
    level_index: usize,
    state: PlayState,
    steps_remaining: u32,
    status: GameStatus,
    frame: Frame,
}

impl SyntheticEnv {
    pub fn new(spec: GameSpec) -> Result<Self, SpecError> {
        let levels = spec.compile()?;
        let state = PlayState::initial(&levels[0]);
        let steps_remaining = levels[0].step_limit;
        let frame = render(&levels[0], &state, steps_remaining, 0);
        Ok(SyntheticEnv {
            spec,
            levels,
            level_index: 0,
            state,
            steps_remaining,
            status: GameStatus::Playing,
            frame,
        })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn level_index(&self) -> usize {
        self.level_index
    }

    pub fn steps_remaining(&self) -> u32 {
        self.steps_remaining
    }

    pub fn status(&self) -> GameStatus {
        self.status
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// The tile under a pixel of the current level, if inside the layout.
    pub fn tile_at_pixel(&self, row: usize, col: usize) -> Option<Tile> {
        let level = &self.levels[self.level_index];
        let (r, c) = (row / level.cell, col / level.cell);
        (r < level.rows && c < level.cols).then(|| level.tile(r, c))
    }

    /// Whether a click on this pixel would hit the visible trap button.
    pub fn is_trap_pixel(&self, row: usize, col: usize) -> bool {
        self.state.progress == 0 && self.tile_at_pixel(row, col) == Some(Tile::Trap)
    }

    fn restart_level(&mut self) {
        let level = &self.levels[self.level_index];
        self.state = PlayState::initial(level);
        self.steps_remaining = level.step_limit;
    }

    fn rerender(&mut self) {
        self.frame = render(
            &self.levels[self.level_index],
            &self.state,
            self.steps_remaining,
            self.level_index,
        );
    }

    fn apply(&mut self, action: &ActionRef) -> Effect {
        let level = &self.levels[self.level_index];
        match *action {
            ActionRef::Arrow { direction } => {
                let Some((r, c)) = self.state.player else {
                    return Effect::None;
                };
                let (dr, dc) = direction.delta();
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr < 0 || nc < 0 || nr as usize >= level.rows || nc as usize >= level.cols {
                    return Effect::None;
                }
                let target = (nr as usize, nc as usize);
                let complete = !level.sequence.is_empty() && self.state.progress == level.sequence.len();
                let passable = match level.tile(target.0, target.1) {
                    Tile::Floor | Tile::Exit | Tile::Key => true,
                    Tile::Door => self.state.keys != 0,
                    Tile::Gate => complete,
                    _ => false,
                };
                if !passable {
                    return Effect::None;
                }
                self.state.player = Some(target);
                if let Some(i) = level.key_index(target) {
                    self.state.keys |= 1 << i;
                }
                if level.tile(target.0, target.1) == Tile::Exit {
                    Effect::Won
                } else {
                    Effect::None
                }
            }
            ActionRef::Click { row, col } => {
                let (row, col) = (row as usize, col as usize);
                let (r, c) = (row / level.cell, col / level.cell);
                if r >= level.rows || c >= level.cols {
                    return Effect::None;
                }
                match level.tile(r, c) {
                    Tile::Trap if self.state.progress == 0 => Effect::Trapped,
                    Tile::Button(id) => {
                        let seq = &level.sequence;
                        if seq.get(self.state.progress) == Some(&id) {
                            self.state.progress += 1;
                        } else {
                            self.state.progress = usize::from(seq.first() == Some(&id));
                        }
                        if level.player_start.is_none() && self.state.progress == seq.len() {
                            Effect::Won
                        } else {
                            Effect::None
                        }
                    }
                    _ => Effect::None,
                }
            }
            ActionRef::Reset => unreachable!("handled by step"),
        }
    }
}

impl Environment for SyntheticEnv {
    fn game_id(&self) -> &str {
        &self.spec.name
    }

    fn scheme(&self) -> ActionScheme {
        self.spec.scheme
    }

    fn level_count(&self) -> Option<usize> {
        Some(self.levels.len())
    }

    fn reset(&mut self) -> Result<Frame, EnvError> {
        self.level_index = 0;
        self.status = GameStatus::Playing;
        self.restart_level();
        self.rerender();
        Ok(self.frame.clone())
    }

    fn step(&mut self, action: &ActionRef) -> Result<StepResult, EnvError> {
        if self.status == GameStatus::Win {
            return Err(EnvError::Finished);
        }
        if !self.spec.scheme.accepts(action) {
            return Err(EnvError::InvalidAction {
                action: *action,
                reason: format!("not part of the {:?} scheme", self.spec.scheme),
            });
        }
        if let ActionRef::Click { row, col } = *action {
            if row as usize >= FRAME_SIZE || col as usize >= FRAME_SIZE {
                return Err(EnvError::InvalidAction {
                    action: *action,
                    reason: "outside the frame".into(),
                });
            }
        }

        let signal = if *action == ActionRef::Reset {
            self.restart_level();
            Some(EnvSignal::LevelReset(ResetCause::Requested))
        } else {
            let effect = self.apply(action);
            self.steps_remaining -= 1;
            match effect {
                Effect::Won if self.level_index + 1 == self.levels.len() => {
                    self.status = GameStatus::Win;
                    Some(EnvSignal::GameWon)
                }
                Effect::Won => {
                    self.level_index += 1;
                    self.restart_level();
                    Some(EnvSignal::LevelComplete)
                }
                Effect::Trapped => {
                    self.restart_level();
                    Some(EnvSignal::LevelReset(ResetCause::Action))
                }
                Effect::None if self.steps_remaining == 0 => {
                    self.restart_level();
                    Some(EnvSignal::LevelReset(ResetCause::StepLimit))
                }
                Effect::None => None,
            }
        };
        self.rerender();
        Ok(StepResult {
            frame: self.frame.clone(),
            signal,
        })
    }
}
