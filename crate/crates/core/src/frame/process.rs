use serde::{Deserialize, Serialize};

use super::{assign_priorities, detect_status_bar, hash_state, segment_frame, Frame, Mask, PriorityTier, Segment, StateKey};
use crate::action::{ActionRef, ActionScheme, Direction};

/// An action offered in a state, with its exploration priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieredAction {
    pub action: ActionRef,
    pub tier: PriorityTier,
}

/// Everything the explorer needs to know about one observation.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessedFrame {
    pub key: StateKey,
    pub segments: Vec<Segment>,
    pub mask: Mask,
    /// Arrows (scheme permitting) followed by one click per segment, in segment order.
    pub actions: Vec<TieredAction>,
}

impl ProcessedFrame {
    /// Actions that do not target a status-bar segment. These are stable for a
    /// given state key, while status-bar clicks follow the changing counter.
    pub fn stable_actions(&self) -> impl Iterator<Item = &TieredAction> {
        self.actions.iter().filter(|a| a.tier != PriorityTier::LOWEST)
    }
}

/// Segments, masks, tiers and hashes a frame.
pub fn process(frame: &Frame, scheme: ActionScheme) -> ProcessedFrame {
    let mut segments = segment_frame(frame);
    let mask = detect_status_bar(&segments, frame);
    for s in &mut segments {
        let (r, c) = s.pixels[0];
        s.is_status_bar = mask.contains(r as usize, c as usize);
    }
    let key = hash_state(frame, &mask);

    let mut actions = Vec::new();
    if scheme.has_arrows() {
        actions.extend(Direction::ALL.iter().map(|&d| TieredAction {
            action: ActionRef::arrow(d),
            tier: PriorityTier::HIGHEST,
        }));
    }
    if scheme.has_clicks() {
        let tiers = assign_priorities(&segments);
        actions.extend(segments.iter().zip(tiers).map(|(s, tier)| TieredAction {
            action: ActionRef::click(s.centroid.0 as usize, s.centroid.1 as usize),
            tier,
        }));
    }

    ProcessedFrame {
        key,
        segments,
        mask,
        actions,
    }
}
