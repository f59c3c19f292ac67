//! Frame processing: segmentation, status-bar masking, action priorities and state keys.

mod hash;
mod priority;
mod process;
mod segment;
mod status_bar;

pub use hash::{hash_state, StateKey, MASK_SENTINEL};
pub use priority::{assign_priorities, PriorityTier};
pub use process::{process, ProcessedFrame, TieredAction};
pub use segment::{segment_frame, Segment};
pub use status_bar::{detect_status_bar, Mask, MAX_BAND_ROWS};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Palette index of a single cell.
pub type ColorIndex = u8;

/// Number of palette entries.
pub const PALETTE_SIZE: u8 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame dimensions must be positive, got {width}x{height}")]
    EmptyFrame { width: usize, height: usize },
    #[error("row {row} has {len} cells, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("cell ({row}, {col}) holds {value}, outside the 16-color palette")]
    BadColor { row: usize, col: usize, value: i64 },
}

/// A grid of palette indices, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    width: usize,
    height: usize,
    cells: Vec<ColorIndex>,
}

impl Frame {
    /// A frame filled with one color.
    pub fn filled(width: usize, height: usize, color: ColorIndex) -> Result<Self, FrameError> {
        Self::from_cells(width, height, vec![color; width * height])
    }

    pub fn from_cells(width: usize, height: usize, cells: Vec<ColorIndex>) -> Result<Self, FrameError> {
        if width == 0 || height == 0 {
            return Err(FrameError::EmptyFrame { width, height });
        }
        assert_eq!(cells.len(), width * height, "cell buffer does not match dimensions");
        if let Some(i) = cells.iter().position(|&c| c >= PALETTE_SIZE) {
            return Err(FrameError::BadColor {
                row: i / width,
                col: i % width,
                value: cells[i] as i64,
            });
        }
        Ok(Frame { width, height, cells })
    }

    /// Builds a frame from rows of integers, validating shape and palette range.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, FrameError> {
        let height = rows.len();
        let width = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if width == 0 || height == 0 {
            return Err(FrameError::EmptyFrame { width, height });
        }
        let mut cells = Vec::with_capacity(width * height);
        for (row, values) in rows.iter().enumerate() {
            let values = values.as_ref();
            if values.len() != width {
                return Err(FrameError::RaggedRow {
                    row,
                    len: values.len(),
                    expected: width,
                });
            }
            for (col, &value) in values.iter().enumerate() {
                if !(0..PALETTE_SIZE as i64).contains(&value) {
                    return Err(FrameError::BadColor { row, col, value });
                }
                cells.push(value as ColorIndex);
            }
        }
        Ok(Frame { width, height, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[ColorIndex] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> ColorIndex {
        self.cells[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, color: ColorIndex) {
        assert!(color < PALETTE_SIZE, "color {color} outside palette");
        self.cells[row * self.width + col] = color;
    }

    /// Paints the rectangle `[row, row + h) x [col, col + w)`, clipped to the frame.
    pub fn fill_rect(&mut self, row: usize, col: usize, h: usize, w: usize, color: ColorIndex) {
        for r in row..(row + h).min(self.height) {
            for c in col..(col + w).min(self.width) {
                self.set(r, c, color);
            }
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ColorIndex]> {
        self.cells.chunks(self.width)
    }
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows())
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        Frame::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
