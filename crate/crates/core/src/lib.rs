//! Search-based repair of broken Lode Runner levels.
//!
//! A broken level has gold the player cannot reach. The searches here look
//! for a playable variant that changes as few tiles as possible, using random
//! search, a hill climber, a (mu + lambda) evolution strategy or MAP-Elites.

pub mod harness;
pub mod level;
pub mod objective;
pub mod operators;
pub mod search;
pub mod traversal;

pub use level::{parse_level, serialize_level, Cell, Level, LevelError, TileKind};
pub use objective::{total_fitness, BehaviorDescriptor, BinIndex, FitnessBreakdown};
pub use search::{repair, Algorithm, Archive, RepairOutcome, SearchParams, SearchResult};
pub use traversal::{flood_fill, ReachabilityReport};
