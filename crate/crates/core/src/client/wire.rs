//! Wire format of the ARC-AGI-3 HTTP API.
//!
//! Endpoint paths, header names and payload fields live here and nowhere else,
//! so that changes to the remote API touch only this file. The mock server
//! speaks the same format through these types.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::action::{ActionRef, ActionScheme, Direction};
use crate::frame::{Frame, FrameError};

pub const API_KEY_HEADER: &str = "X-API-Key";
pub const OPEN_SCORECARD: &str = "/api/scorecard/open";
pub const CLOSE_SCORECARD: &str = "/api/scorecard/close";
pub const RESET_COMMAND: &str = "RESET";
const CLICK_ACTION_ID: u8 = 6;

pub fn command_path(command: &str) -> String {
    format!("/api/cmd/{command}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenScorecardRequest {
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenScorecardResponse {
    pub card_id: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloseScorecardRequest {
    pub card_id: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResetRequest {
    pub game_id: String,
    pub card_id: String,
    /// Present to restart the current level of an existing session.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guid: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionRequest {
    pub game_id: String,
    pub guid: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<u16>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GameState {
    NotPlayed,
    #[serde(alias = "PLAYING")]
    NotFinished,
    Win,
    GameOver,
}

/// Response body of every game command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameData {
    pub game_id: String,
    #[serde(default)]
    pub guid: Option<String>,
    /// One or more 64x64 grids; the last one is the settled frame.
    pub frame: Value,
    pub state: GameState,
    /// Levels completed so far.
    #[serde(default)]
    pub score: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub win_score: Option<u32>,
    #[serde(default)]
    pub available_actions: Vec<u8>,
}

/// API command and click coordinates for an action.
pub fn action_command(action: &ActionRef) -> (String, Option<(u16, u16)>) {
    match *action {
        ActionRef::Arrow { direction } => {
            let id = match direction {
                Direction::Up => 1,
                Direction::Down => 2,
                Direction::Left => 3,
                Direction::Right => 4,
            };
            (format!("ACTION{id}"), None)
        }
        ActionRef::Click { row, col } => (format!("ACTION{CLICK_ACTION_ID}"), Some((col, row))),
        ActionRef::Reset => (RESET_COMMAND.to_string(), None),
    }
}

/// Inverse of [`action_command`], used by the mock server.
pub fn parse_command(command: &str, request: &ActionRequest) -> Option<ActionRef> {
    let id: u8 = command.strip_prefix("ACTION")?.parse().ok()?;
    Some(match id {
        1 => ActionRef::arrow(Direction::Up),
        2 => ActionRef::arrow(Direction::Down),
        3 => ActionRef::arrow(Direction::Left),
        4 => ActionRef::arrow(Direction::Right),
        CLICK_ACTION_ID => ActionRef::click(request.y? as usize, request.x? as usize),
        _ => return None,
    })
}

pub fn available_actions(scheme: ActionScheme) -> Vec<u8> {
    let mut ids = Vec::new();
    if scheme.has_arrows() {
        ids.extend([1, 2, 3, 4]);
    }
    if scheme.has_clicks() {
        ids.push(CLICK_ACTION_ID);
    }
    ids
}

pub fn scheme_from_available(ids: &[u8]) -> Option<ActionScheme> {
    let arrows = ids.iter().any(|id| (1..=4).contains(id));
    let clicks = ids.contains(&CLICK_ACTION_ID);
    match (arrows, clicks) {
        (true, true) => Some(ActionScheme::Combined),
        (true, false) => Some(ActionScheme::Arrows),
        (false, true) => Some(ActionScheme::Clicks),
        (false, false) => None,
    }
}

/// Encodes a frame the way the API does: a list holding one grid.
pub fn encode_frame(frame: &Frame) -> Value {
    serde_json::json!([frame])
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FrameDecodeError {
    #[error("frame is not a list of integer grids")]
    Shape,
    #[error(transparent)]
    Grid(#[from] FrameError),
}

/// Decodes the `frame` field: either one grid or a list of grids.
pub fn decode_frame(value: &Value) -> Result<Frame, FrameDecodeError> {
    let outer = value.as_array().ok_or(FrameDecodeError::Shape)?;
    let grid = match outer.last() {
        Some(Value::Array(rows)) if rows.first().is_some_and(Value::is_array) => rows,
        Some(Value::Array(_)) => outer,
        _ => return Err(FrameDecodeError::Shape),
    };
    let rows = grid
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or(FrameDecodeError::Shape)?
                .iter()
                .map(|v| v.as_i64().ok_or(FrameDecodeError::Shape))
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Frame::from_rows(&rows)?)
}
