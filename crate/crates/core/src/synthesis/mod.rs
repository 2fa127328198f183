//! Building circuits: RSM compilation to rotary elements, flattening of
//! machine elements, exhaustive circuit search and the universality chain.

mod compile;

pub use compile::{synthesize_rsm, Layout, SynthesisError, SynthesizedRsm, H, V};
mod flatten;

pub use flatten::{flatten_to_re, Flattened};
mod search;

pub use search::{search_circuit, SearchOptions, SearchResult};
mod chain;
pub mod library;

pub use chain::{feedback_netlist, universality_chain, ChainError, ChainReport, Descent};
pub use library::{Library, LinkStatus};
