//! Reversible logic elements with memory: enumeration, equivalence,
//! circuit simulation, synthesis and analysis.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod classify;
pub mod feedback;
pub mod renaming;
pub mod report;
pub mod rsm;
pub mod rtm;
pub mod synthesis;
pub mod table;

pub use circuit::{Circuit, Netlist};
pub use classify::{census, classify_degeneracy, Census, DegeneracyLabel};
pub use renaming::{are_equivalent, canonical_serial, find_renaming, Renaming};
pub use rsm::Rsm;
pub use table::{MoveTable, RlemId};
