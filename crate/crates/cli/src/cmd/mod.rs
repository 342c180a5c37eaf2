pub mod dimgroup;
pub mod graph;
pub mod lpa;
pub mod monoid;
pub mod sandpile;
pub mod shift;

use std::path::Path;

use anyhow::{Context, Result};
use monodyn::{Graph, IntMatrix};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read_text(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

pub fn read_matrix(path: &Path) -> Result<IntMatrix> {
    IntMatrix::parse(&read_text(path)?).with_context(|| format!("parsing matrix {}", path.display()))
}
