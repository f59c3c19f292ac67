use super::{Frame, Segment};

/// Tallest band, in rows, that can be classified as a status bar.
pub const MAX_BAND_ROWS: usize = 4;
const MAX_TICK_AREA: usize = 8;
const MIN_TICKS: usize = 3;

/// A set of masked pixels, stored as a bitmap over the frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
    len: usize,
}

impl Mask {
    pub fn empty(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            bits: vec![false; width * height],
            len: 0,
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut mask = Mask::empty(width, height);
        for (r, c) in pixels {
            mask.insert(r, c);
        }
        mask
    }

    pub fn insert(&mut self, row: usize, col: usize) {
        assert!(row < self.height && col < self.width, "mask pixel ({row}, {col}) out of bounds");
        let bit = &mut self.bits[row * self.width + col];
        if !*bit {
            *bit = true;
            self.len += 1;
        }
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        row < self.height && col < self.width && self.bits[row * self.width + col]
    }

    #[inline]
    pub(crate) fn contains_index(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Masked pixels in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / w, i % w))
    }
}

/// Finds probable status bars and returns the union of their pixels.
///
/// A band qualifies when it spans at most [`MAX_BAND_ROWS`] rows along the top or
/// bottom edge, the row just inside it is a solid single color, no segment
/// crosses the band boundary, and it holds at least three segments of area
/// at most 8. Per edge, the band bounded by the solid row nearest the edge wins,
/// so the separator itself is never masked.
pub fn detect_status_bar(segments: &[Segment], frame: &Frame) -> Mask {
    let (w, h) = (frame.width(), frame.height());
    let mut mask = Mask::empty(w, h);
    for edge in [Edge::Top, Edge::Bottom] {
        if let Some(rows) = (1..=MAX_BAND_ROWS).find_map(|n| qualifying_band(segments, frame, edge, n)) {
            for r in rows {
                for c in 0..w {
                    mask.insert(r, c);
                }
            }
        }
    }
    mask
}

#[derive(Clone, Copy)]
enum Edge {
    Top,
    Bottom,
}

fn qualifying_band(segments: &[Segment], frame: &Frame, edge: Edge, rows: usize) -> Option<std::ops::Range<usize>> {
    let h = frame.height();
    if h < rows + 1 {
        return None;
    }
    let (band, separator) = match edge {
        Edge::Top => (0..rows, rows),
        Edge::Bottom => (h - rows..h, h - rows - 1),
    };
    let sep = &frame.cells()[separator * frame.width()..(separator + 1) * frame.width()];
    if sep.iter().any(|&c| c != sep[0]) {
        return None;
    }
    let (lo, hi) = (band.start as u16, band.end as u16 - 1);
    let mut ticks = 0;
    for s in segments {
        let (top, bottom) = (s.bbox.0, s.bbox.2);
        if bottom < lo || top > hi {
            continue;
        }
        if top < lo || bottom > hi {
            return None;
        }
        if s.area <= MAX_TICK_AREA {
            ticks += 1;
        }
    }
    (ticks >= MIN_TICKS).then_some(band)
}
