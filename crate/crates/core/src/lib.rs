pub mod branching;
pub mod cli;
pub mod counting;
pub mod decay;
pub mod error;
pub mod exact;
pub mod format;
pub mod gadget;
pub mod hypergraph;
pub mod sawtree;

pub use error::{HypergraphError, ParseError};
pub use hypergraph::{ActivityVector, Hypergraph, Pinning, Spin, Stats, Typing};
