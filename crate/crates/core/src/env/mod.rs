//! The environment contract shared by the local simulator and the remote client.

mod render;
mod spec;
mod suite;
mod synthetic;

pub use render::{palette, SCENE_ROWS};
pub use spec::{GameSpec, LevelSpec, SpecError, Tile};
pub use suite::{builtin_game, builtin_suite, BUILTIN_NAMES};
pub use synthetic::{GameStatus, SyntheticEnv};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{ActionRef, ActionScheme};
use crate::client::ClientError;
use crate::frame::Frame;

/// Why a level returned to its initial state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResetCause {
    /// The step counter ran out.
    StepLimit,
    /// The action itself reset the level.
    Action,
    /// The agent issued [`ActionRef::Reset`].
    Requested,
    /// The environment restarted the level without saying why.
    Unknown,
}

/// Explicit level-change signal attached to a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvSignal {
    LevelReset(ResetCause),
    LevelComplete,
    /// The last level was completed.
    GameWon,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    pub frame: Frame,
    pub signal: Option<EnvSignal>,
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("invalid action {action}: {reason}")]
    InvalidAction { action: ActionRef, reason: String },
    #[error("the game is already won")]
    Finished,
    #[error(transparent)]
    Remote(#[from] ClientError),
}

/// A deterministic, fully observable game played one step at a time.
pub trait Environment {
    fn game_id(&self) -> &str;

    fn scheme(&self) -> ActionScheme;

    /// Number of levels, when the environment knows it.
    fn level_count(&self) -> Option<usize>;

    /// Restarts the game at its first level.
    fn reset(&mut self) -> Result<Frame, EnvError>;

    fn step(&mut self, action: &ActionRef) -> Result<StepResult, EnvError>;
}

impl<E: Environment + ?Sized> Environment for Box<E> {
    fn game_id(&self) -> &str {
        (**self).game_id()
    }

    fn scheme(&self) -> ActionScheme {
        (**self).scheme()
    }

    fn level_count(&self) -> Option<usize> {
        (**self).level_count()
    }

    fn reset(&mut self) -> Result<Frame, EnvError> {
        (**self).reset()
    }

    fn step(&mut self, action: &ActionRef) -> Result<StepResult, EnvError> {
        (**self).step(action)
    }
}
