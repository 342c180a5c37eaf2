//! Sandpiles, graph monoids, dimension groups and shift equivalence over
//! finite directed multigraphs.

pub mod dimension;
pub mod graph;
pub mod lpa;
pub mod matrix;
pub mod monoid;
pub mod sandpile;
pub mod shifteq;
pub mod snf;

pub use graph::{Graph, GraphBuilder, GraphError};
pub use matrix::{IntMatrix, MatrixError};
