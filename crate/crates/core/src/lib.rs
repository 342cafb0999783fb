//! Ollivier-Ricci curvature for hypergraphs: random-walk measures, exact
//! optimal transport, edge/node/subset curvatures, synthetic generators and
//! collection-level statistics.

pub mod analysis;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod measures;
pub mod transport;

pub use error::{Error, Result};
