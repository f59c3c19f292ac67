use super::{ColorIndex, Frame};

/// A maximal 4-connected single-color region of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub color: ColorIndex,
    /// Member pixels as `(row, col)`, sorted row-major.
    pub pixels: Vec<(u16, u16)>,
    /// `(min_row, min_col, max_row, max_col)`, inclusive.
    pub bbox: (u16, u16, u16, u16),
    pub area: usize,
    /// Click target: the bbox center if it belongs to the segment, else the
    /// nearest member pixel (first in row-major order on ties).
    pub centroid: (u16, u16),
    pub fill_ratio: f64,
    pub is_status_bar: bool,
}

impl Segment {
    /// `pixels` must be sorted row-major.
    fn from_pixels(color: ColorIndex, pixels: Vec<(u16, u16)>) -> Self {
        debug_assert!(pixels.windows(2).all(|p| p[0] < p[1]));
        let mut bbox = (pixels[0].0, u16::MAX, pixels[pixels.len() - 1].0, 0);
        for &(_, c) in &pixels {
            bbox.1 = bbox.1.min(c);
            bbox.3 = bbox.3.max(c);
        }
        let area = pixels.len();
        let bbox_area = (bbox.2 - bbox.0 + 1) as usize * (bbox.3 - bbox.1 + 1) as usize;
        let centroid = centroid_of(&pixels, bbox);
        Segment {
            color,
            pixels,
            bbox,
            area,
            centroid,
            fill_ratio: area as f64 / bbox_area as f64,
            is_status_bar: false,
        }
    }

    pub fn bbox_height(&self) -> usize {
        (self.bbox.2 - self.bbox.0 + 1) as usize
    }

    pub fn bbox_width(&self) -> usize {
        (self.bbox.3 - self.bbox.1 + 1) as usize
    }

    pub fn contains(&self, row: u16, col: u16) -> bool {
        self.pixels.binary_search(&(row, col)).is_ok()
    }
}

fn centroid_of(pixels: &[(u16, u16)], bbox: (u16, u16, u16, u16)) -> (u16, u16) {
    // Doubled coordinates keep the center exact for even-sized boxes.
    let center2 = (
        bbox.0 as i64 + bbox.2 as i64,
        bbox.1 as i64 + bbox.3 as i64,
    );
    let center = ((center2.0 / 2) as u16, (center2.1 / 2) as u16);
    if pixels.binary_search(&center).is_ok() {
        return center;
    }
    let dist2 = |&(r, c): &(u16, u16)| {
        let dr = 2 * r as i64 - center2.0;
        let dc = 2 * c as i64 - center2.1;
        dr * dr + dc * dc
    };
    // `pixels` is row-major sorted and min_by_key keeps the first minimum.
    *pixels.iter().min_by_key(|p| dist2(p)).expect("segments are non-empty")
}

/// Splits a frame into its 4-connected single-color components.
///
/// Output is ordered by the bbox's `(min_row, min_col)`, then color, then the
/// first member pixel.
pub fn segment_frame(frame: &Frame) -> Vec<Segment> {
    const UNSEEN: u32 = u32::MAX;
    let (w, h) = (frame.width(), frame.height());
    let cells = frame.cells();
    let mut labels = vec![UNSEEN; w * h];
    let mut colors = Vec::new();
    let mut stack = Vec::new();

    for start in 0..w * h {
        if labels[start] != UNSEEN {
            continue;
        }
        let label = colors.len() as u32;
        let color = cells[start];
        colors.push(color);
        labels[start] = label;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (r, c) = (i / w, i % w);
            let mut visit = |j: usize| {
                if labels[j] == UNSEEN && cells[j] == color {
                    labels[j] = label;
                    stack.push(j);
                }
            };
            if r > 0 {
                visit(i - w);
            }
            if r + 1 < h {
                visit(i + w);
            }
            if c > 0 {
                visit(i - 1);
            }
            if c + 1 < w {
                visit(i + 1);
            }
        }
    }

    // a row-major scan yields every component's pixels already sorted
    let mut sizes = vec![0usize; colors.len()];
    for &l in &labels {
        sizes[l as usize] += 1;
    }
    let mut pixels: Vec<Vec<(u16, u16)>> = sizes.iter().map(|&n| Vec::with_capacity(n)).collect();
    for (i, &l) in labels.iter().enumerate() {
        pixels[l as usize].push(((i / w) as u16, (i % w) as u16));
    }
    let mut segments: Vec<Segment> = colors
        .into_iter()
        .zip(pixels)
        .map(|(color, px)| Segment::from_pixels(color, px))
        .collect();
    segments.sort_by(|a, b| {
        (a.bbox.0, a.bbox.1, a.color, a.pixels[0]).cmp(&(b.bbox.0, b.bbox.1, b.color, b.pixels[0]))
    });
    segments
}
