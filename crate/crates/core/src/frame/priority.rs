use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ColorIndex, Segment};

/// Salience rank of an action: 1 is explored first, 5 is reserved for status bars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct PriorityTier(u8);

impl PriorityTier {
    pub const HIGHEST: PriorityTier = PriorityTier(1);
    pub const LOWEST: PriorityTier = PriorityTier(5);
    pub const COUNT: usize = 5;

    pub fn new(value: u8) -> Option<Self> {
        (1..=5).contains(&value).then_some(PriorityTier(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based index, for per-tier tables.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// The next lower-salience tier, or `None` past tier 5.
    pub fn next(self) -> Option<Self> {
        PriorityTier::new(self.0 + 1)
    }

    pub fn all() -> impl Iterator<Item = PriorityTier> {
        (1..=5).map(PriorityTier)
    }
}

impl TryFrom<u8> for PriorityTier {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        PriorityTier::new(value).ok_or_else(|| format!("priority tier {value} outside 1..=5"))
    }
}

impl From<PriorityTier> for u8 {
    fn from(t: PriorityTier) -> u8 {
        t.0
    }
}

impl fmt::Display for PriorityTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Tiers each segment by size, compactness and color rarity.
///
/// - 5: status bar
/// - 1: area 4..=64, fill >= 0.8, color among the three rarest (button-like)
/// - 2: area 4..=256, fill >= 0.5
/// - 3: area < 4, or area <= 1024
/// - 4: everything larger (backgrounds)
///
/// Color rarity is ranked by pixel count over non-status-bar segments; a
/// color's rank is one plus the number of colors strictly rarer than it.
pub fn assign_priorities(segments: &[Segment]) -> Vec<PriorityTier> {
    let mut counts: HashMap<ColorIndex, usize> = HashMap::new();
    for s in segments.iter().filter(|s| !s.is_status_bar) {
        *counts.entry(s.color).or_default() += s.area;
    }
    let rarity_rank = |color: ColorIndex| {
        let own = counts[&color];
        1 + counts.values().filter(|&&n| n < own).count()
    };

    segments
        .iter()
        .map(|s| {
            let tier = if s.is_status_bar {
                5
            } else if (4..=64).contains(&s.area) && s.fill_ratio >= 0.8 && rarity_rank(s.color) <= 3 {
                1
            } else if (4..=256).contains(&s.area) && s.fill_ratio >= 0.5 {
                2
            } else if s.area <= 1024 {
                3
            } else {
                4
            };
            PriorityTier(tier)
        })
        .collect()
}
