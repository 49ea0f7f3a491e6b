#![allow(clippy::needless_range_loop)]

pub mod braid;
pub mod chain;
pub mod commands;
pub mod error;
pub mod gluing;
pub mod invariants;
pub mod linalg;
pub mod link;
pub mod monodromy;
pub mod moves;
pub mod report;
pub mod search;
pub mod suite;
pub mod theorem;
pub mod unlink;

pub use error::{Error, Result};
pub use invariants::InvariantSummary;
pub use link::{ComponentKind, FramedLink};
pub use moves::{Move, MoveScript, ScriptBuilder, SlideMove};
