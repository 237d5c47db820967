//! Exact two-point connection probabilities for bunkbed-type percolation
//! and random-orientation models on small multigraphs, together with the
//! conditioning reductions between them and exhaustive instance searches.

pub mod canon;
pub mod error;
pub mod format;
pub mod graph;
pub mod lemmas;
pub mod minor;
pub mod models;
pub mod poly;
pub mod rational;
pub mod reach;
pub mod reductions;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use graph::{BunkbedGraph, EdgePartition, MultiGraph, Transversal};
pub use rational::Rational;
pub use reach::{Coloring, Endpoint, Orientation, ReachSet};
