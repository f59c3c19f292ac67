//! Training-free exploration of deterministic grid games.
//!
//! Frames are segmented into single-color components, the step counter is
//! masked out, and the masked frame is hashed into a state key. The explorer
//! keeps a directed graph of states and tested actions and always heads for
//! the nearest state that still has an untested action of high salience.

pub mod action;
pub mod agent;
pub mod client;
pub mod env;
pub mod frame;
pub mod graph;
pub mod harness;

pub use action::{ActionRef, ActionScheme, Direction};
pub use agent::{run_episode, AgentKind, EpisodeOptions, EpisodeState, StepOutcome};
pub use env::{EnvSignal, Environment, GameSpec, SyntheticEnv};
pub use frame::{process, Frame, PriorityTier, ProcessedFrame, StateKey};
pub use graph::{LevelGraph, Outcome};
