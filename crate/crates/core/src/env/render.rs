use super::spec::{CompiledLevel, Tile};
use super::synthetic::PlayState;
use crate::frame::Frame;

pub(crate) const FRAME_SIZE: usize = 64;
/// Rows available to the game scene; below them sit the separator and the status band.
pub const SCENE_ROWS: usize = 61;
const SEPARATOR_ROW: usize = 61;
const TICK_ROW: usize = 62;
const LEVEL_ROW: usize = 63;
const MAX_TICKS: u32 = 28;

/// Palette indices used by the simulator.
pub mod palette {
    pub const FLOOR: u8 = 0;
    pub const TRAP: u8 = 2;
    pub const WALL: u8 = 5;
    pub const GATE: u8 = 9;
    pub const KEY: u8 = 11;
    pub const PLAYER: u8 = 12;
    pub const DOOR: u8 = 13;
    pub const EXIT: u8 = 14;
    pub const LIT: u8 = 15;
    pub const BUTTONS: [u8; 6] = [3, 4, 6, 7, 8, 10];
    pub const SEPARATOR: u8 = WALL;
    pub const BAND: u8 = FLOOR;
    pub const TICK: u8 = 11;
    pub const LEVEL_DOT: u8 = 12;
}

pub(crate) fn render(
    level: &CompiledLevel,
    state: &PlayState,
    steps_remaining: u32,
    level_index: usize,
) -> Frame {
    let mut frame = Frame::filled(FRAME_SIZE, FRAME_SIZE, palette::FLOOR).expect("static dimensions");
    let lit = &level.sequence[..state.progress];
    let complete = !level.sequence.is_empty() && state.progress == level.sequence.len();
    for r in 0..level.rows {
        for c in 0..level.cols {
            let color = match level.tile(r, c) {
                Tile::Floor => palette::FLOOR,
                Tile::Wall => palette::WALL,
                Tile::Exit => palette::EXIT,
                Tile::Key if state.holds_key_at(level, (r, c)) => palette::FLOOR,
                Tile::Key => palette::KEY,
                Tile::Door if state.keys != 0 => palette::FLOOR,
                Tile::Door => palette::DOOR,
                Tile::Gate if complete => palette::FLOOR,
                Tile::Gate => palette::GATE,
                Tile::Trap if state.progress == 0 => palette::TRAP,
                Tile::Trap => palette::FLOOR,
                Tile::Button(id) if lit.contains(&id) => palette::LIT,
                Tile::Button(id) => palette::BUTTONS[id as usize],
                Tile::Decor(color) => color,
            };
            frame.fill_rect(r * level.cell, c * level.cell, level.cell, level.cell, color);
        }
    }
    if let Some((r, c)) = state.player {
        frame.fill_rect(r * level.cell, c * level.cell, level.cell, level.cell, palette::PLAYER);
    }

    frame.fill_rect(SEPARATOR_ROW, 0, 1, FRAME_SIZE, palette::SEPARATOR);
    frame.fill_rect(TICK_ROW, 0, 2, FRAME_SIZE, palette::BAND);
    // at least three ticks while the level is running, so the band stays detectable
    let ticks = 2 + (steps_remaining * MAX_TICKS).div_ceil(level.step_limit);
    for k in 0..ticks as usize {
        frame.set(TICK_ROW, 2 * k + 1, palette::TICK);
    }
    for k in 0..=level_index {
        frame.set(LEVEL_ROW, FRAME_SIZE - 2 - 2 * k, palette::LEVEL_DOT);
    }
    frame
}
