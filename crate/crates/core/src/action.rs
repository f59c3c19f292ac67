//! Abstract actions shared by the frame processor, the graph and the environments.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Arrow-key direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    /// Row/column delta applied by this direction.
    pub fn delta(self) -> (isize, isize) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }
}

/// An action the agent can issue to an environment.
///
/// `Reset` is never produced by frame processing; agents only issue it deliberately
/// (the reset-to-start shortcut or recovery from an exhausted region).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ActionRef {
    Arrow { direction: Direction },
    Click { row: u16, col: u16 },
    Reset,
}

impl ActionRef {
    pub fn arrow(direction: Direction) -> Self {
        ActionRef::Arrow { direction }
    }

    pub fn click(row: usize, col: usize) -> Self {
        ActionRef::Click {
            row: row as u16,
            col: col as u16,
        }
    }
}

impl fmt::Display for ActionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionRef::Arrow { direction } => write!(f, "{direction:?}"),
            ActionRef::Click { row, col } => write!(f, "click({row},{col})"),
            ActionRef::Reset => f.write_str("reset"),
        }
    }
}

/// Control scheme of a game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionScheme {
    Arrows,
    Clicks,
    Combined,
}

impl ActionScheme {
    pub fn has_arrows(self) -> bool {
        matches!(self, ActionScheme::Arrows | ActionScheme::Combined)
    }

    pub fn has_clicks(self) -> bool {
        matches!(self, ActionScheme::Clicks | ActionScheme::Combined)
    }

    /// Size of the raw action space for a `width` x `height` frame.
    pub fn raw_size(self, width: usize, height: usize) -> usize {
        let arrows = if self.has_arrows() { 4 } else { 0 };
        let clicks = if self.has_clicks() { width * height } else { 0 };
        arrows + clicks
    }

    /// The `index`-th action of the raw action space: arrows first, then every
    /// pixel in row-major order.
    pub fn raw_action(self, index: usize, width: usize) -> ActionRef {
        let mut index = index;
        if self.has_arrows() {
            if index < 4 {
                return ActionRef::arrow(Direction::ALL[index]);
            }
            index -= 4;
        }
        ActionRef::click(index / width, index % width)
    }

    pub fn accepts(self, action: &ActionRef) -> bool {
        match action {
            ActionRef::Arrow { .. } => self.has_arrows(),
            ActionRef::Click { .. } => self.has_clicks(),
            ActionRef::Reset => true,
        }
    }
}

impl std::str::FromStr for ActionScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arrows" => Ok(ActionScheme::Arrows),
            "clicks" => Ok(ActionScheme::Clicks),
            "combined" => Ok(ActionScheme::Combined),
            other => Err(format!("unknown action scheme `{other}`")),
        }
    }
}
