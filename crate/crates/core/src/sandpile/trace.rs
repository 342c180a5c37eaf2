//! Firing sequences rendered in additive notation, e.g. `8v ⟿ 6v+u`.

use super::ChipConfig;
use crate::graph::Graph;

/// Configurations visited during a stabilization, one per single firing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    states: Vec<ChipConfig>,
}

impl Trace {
    pub fn new(start: ChipConfig) -> Self {
        Trace { states: vec![start] }
    }

    pub fn push(&mut self, c: ChipConfig) {
        self.states.push(c);
    }

    pub fn states(&self) -> &[ChipConfig] {
        &self.states
    }

    /// Number of single firings recorded.
    pub fn firings(&self) -> usize {
        self.states.len() - 1
    }

    /// Each state as a sum of vertex names; see [`format_trace`].
    pub fn terms(&self, g: &Graph) -> Vec<String> {
        // Vertices are listed in the order they first hold chips during the
        // trace; ties within one state fall back to declaration order.
        let mut order: Vec<usize> = Vec::new();
        for s in &self.states {
            for v in 0..g.vertex_count() {
                if s.get(v) > 0 && !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        self.states
            .iter()
            .map(|s| {
                let parts: Vec<String> = order
                    .iter()
                    .filter(|&&v| s.get(v) > 0)
                    .map(|&v| match s.get(v) {
                        1 => g.name(v).to_string(),
                        n => format!("{n}{}", g.name(v)),
                    })
                    .collect();
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+")
                }
            })
            .collect()
    }
}

/// Joins the states of a trace with ` ⟿ `.
pub fn format_trace(g: &Graph, trace: &Trace) -> String {
    trace.terms(g).join(" ⟿ ")
}
