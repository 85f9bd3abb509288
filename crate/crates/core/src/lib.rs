//! Exact and Monte-Carlo tooling for integer-valued M-Lipschitz functions on
//! finite regular graphs, with expander certificates, flaw decompositions,
//! graph containers, and entropy checks.

pub mod error;
pub mod experiment;
pub mod cli;
pub mod containers;
pub mod entropy;
pub mod flaws;
pub mod gates;
pub mod graph;
pub mod lipschitz;
pub mod seed;
pub mod spectral;

pub use error::{Error, NodeBudget, Result};
pub use graph::{Graph, VertexSet};
