//! Grid-world environments for reward-privacy experiments.
//!
//! Parses FrozenLake-style map files into [`GridMap`]s and turns them into
//! dense tabular MDPs with slip ("wind") dynamics. Maps are plain text, one
//! row per line, over the tile alphabet `S F H A G Y` where `Y` marks the
//! start cell.

mod corpus;
mod map;
mod mdp;
mod perturb;

pub use corpus::{bundled_maps, BundledMap};
pub use map::{GridMap, MapError, TileKind};
pub use mdp::{build_mdp, Action, RewardTable, TabularMdp, N_ACTIONS};
pub use perturb::neighboring_reward;
