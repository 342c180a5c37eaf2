//! Search and budget bounds: defaults, then `monodyn.toml`, then flags.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    pub search_depth: usize,
    pub monoid_elements: usize,
    pub max_power: u32,
    pub firing_budget: u64,
    pub inner_dim: usize,
    pub max_nodes: usize,
    pub max_lag: u32,
    pub coeff_bound: u32,
    pub max_candidates: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            search_depth: 6,
            monoid_elements: 10_000,
            max_power: 64,
            firing_budget: 1_000_000_000,
            inner_dim: 3,
            max_nodes: 20_000,
            max_lag: 4,
            coeff_bound: 2,
            max_candidates: 1_000_000,
        }
    }
}

/// Flag overrides; `None` keeps the file or default value.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct BoundFlags {
    /// Rewrite-search depth for word problems and enumeration.
    #[arg(long, global = true)]
    pub search_depth: Option<usize>,
    /// Cap on enumerated monoid elements.
    #[arg(long, global = true)]
    pub monoid_elements: Option<usize>,
    /// Highest matrix power tried by dimension-group queries.
    #[arg(long, global = true)]
    pub max_power: Option<u32>,
    /// Firing budget for stabilization.
    #[arg(long, global = true)]
    pub firing_budget: Option<u64>,
    /// Largest inner dimension of factorizations in SSE search.
    #[arg(long, global = true)]
    pub inner_dim: Option<usize>,
    /// Node cap for SSE search.
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,
    /// Largest lag tried by SE search.
    #[arg(long, global = true)]
    pub max_lag: Option<u32>,
    /// Coefficient range for SE search.
    #[arg(long, global = true)]
    pub coeff_bound: Option<u32>,
    /// Generator assignments tried by monoid isomorphism search.
    #[arg(long, global = true)]
    pub max_candidates: Option<u64>,
}

impl Bounds {
    pub fn load(path: Option<&Path>, flags: &BoundFlags) -> Result<Bounds> {
        let mut b = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => Bounds::default(),
        };
        macro_rules! apply {
            ($($f:ident),*) => { $(if let Some(v) = flags.$f { b.$f = v; })* };
        }
        apply!(
            search_depth,
            monoid_elements,
            max_power,
            firing_budget,
            inner_dim,
            max_nodes,
            max_lag,
            coeff_bound,
            max_candidates
        );
        Ok(b)
    }
}
