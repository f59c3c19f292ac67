use std::fmt;

use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_64_with_seed;

use super::{Frame, Mask};

/// Value written in place of masked cells before hashing.
pub const MASK_SENTINEL: u8 = 255;

const HASH_SEED: u64 = 0x5EED_F00D_A3C0_0001;

/// Identity of a game state: a 64-bit digest of the masked frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateKey(pub u64);

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// Hashes `width`, `height` (u32 little-endian) followed by every cell in
/// row-major order, masked cells replaced by [`MASK_SENTINEL`].
pub fn hash_state(frame: &Frame, mask: &Mask) -> StateKey {
    assert_eq!(
        mask.dims(),
        (frame.width(), frame.height()),
        "mask dimensions do not match frame"
    );
    let mut bytes = Vec::with_capacity(8 + frame.cells().len());
    bytes.extend_from_slice(&(frame.width() as u32).to_le_bytes());
    bytes.extend_from_slice(&(frame.height() as u32).to_le_bytes());
    bytes.extend(
        frame
            .cells()
            .iter()
            .enumerate()
            .map(|(i, &c)| if mask.contains_index(i) { MASK_SENTINEL } else { c }),
    );
    StateKey(xxh3_64_with_seed(&bytes, HASH_SEED))
}
