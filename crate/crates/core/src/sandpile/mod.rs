//! Chip-firing on directed multigraphs.
//!
//! A vertex holding at least as many chips as its outdegree fires, sending one
//! chip along each out-edge. Sinks never fire and hold no chips; whatever
//! reaches a sink is tallied in [`ChipConfig::absorbed`].

mod grid;
mod render;
mod trace;

use std::collections::VecDeque;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::monoid::MonoidTable;

pub use grid::{make_grid, stabilize_grid, GridMode, GridSpec, GridState};
pub use render::{render_cells, render_ppm, Palette};
pub use trace::{format_trace, Trace};

/// Default number of single firings allowed before giving up.
pub const DEFAULT_FIRING_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SandpileError {
    #[error("vertex `{0}` is a sink and never fires")]
    FireSink(String),
    #[error("vertex `{vertex}` is stable ({chips} chips, outdegree {outdegree})")]
    FireStable {
        vertex: String,
        chips: u64,
        outdegree: u64,
    },
    #[error("did not stabilize within a budget of {budget} firings")]
    BudgetExceeded { budget: u64 },
    #[error("vertex `{0}` is a sink; sinks hold no chips")]
    ChipsOnSink(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("configuration is not stable at `{0}`")]
    NotStable(String),
    #[error("not a sandpile graph (needs a unique sink reachable from every vertex)")]
    NotSandpile,
    #[error("{count} stable configurations exceed the cap of {cap}")]
    TooManyElements { count: u128, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("grid placement ({row},{col}) is outside the {rows}x{cols} grid")]
    OffGrid {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Chip counts per vertex plus the number of chips swallowed by sinks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChipConfig {
    counts: Vec<u64>,
    absorbed: u64,
}

impl ChipConfig {
    pub fn zero(g: &Graph) -> Self {
        ChipConfig {
            counts: vec![0; g.vertex_count()],
            absorbed: 0,
        }
    }

    /// Builds a configuration from per-vertex counts (sinks must be 0).
    pub fn from_counts(g: &Graph, counts: Vec<u64>) -> Result<Self, SandpileError> {
        assert_eq!(counts.len(), g.vertex_count(), "one count per vertex");
        if let Some(v) = (0..counts.len()).find(|&v| g.is_sink(v) && counts[v] > 0) {
            return Err(SandpileError::ChipsOnSink(g.name(v).to_string()));
        }
        Ok(ChipConfig { counts, absorbed: 0 })
    }

    pub fn from_pairs(g: &Graph, pairs: &[(&str, u64)]) -> Result<Self, SandpileError> {
        let mut c = Self::zero(g);
        for &(name, n) in pairs {
            let v = g
                .index_of(name)
                .ok_or_else(|| SandpileError::UnknownVertex(name.to_string()))?;
            c.add_chips(g, v, n)?;
        }
        Ok(c)
    }

    /// Parses `<vertex> <count>` lines; absent vertices hold 0 chips.
    pub fn parse(g: &Graph, text: &str) -> Result<Self, SandpileError> {
        let mut c = Self::zero(g);
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [name, count] = toks[..] else {
                return Err(SandpileError::Parse {
                    line: k + 1,
                    message: "expected `<vertex> <count>`".into(),
                });
            };
            let n = count.parse::<u64>().map_err(|_| SandpileError::Parse {
                line: k + 1,
                message: format!("bad chip count `{count}`"),
            })?;
            let v = g
                .index_of(name)
                .ok_or_else(|| SandpileError::UnknownVertex(name.to_string()))?;
            c.add_chips(g, v, n)?;
        }
        Ok(c)
    }

    pub fn add_chips(&mut self, g: &Graph, v: usize, n: u64) -> Result<(), SandpileError> {
        if n > 0 && g.is_sink(v) {
            return Err(SandpileError::ChipsOnSink(g.name(v).to_string()));
        }
        self.counts[v] += n;
        Ok(())
    }

    pub fn get(&self, v: usize) -> u64 {
        self.counts[v]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn absorbed(&self) -> u64 {
        self.absorbed
    }

    /// Chips on vertices plus chips absorbed; unchanged by firing.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.absorbed
    }

    pub fn chips_on_vertices(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Pointwise sum of counts; absorbed tallies add as well.
    pub fn plus(&self, other: &ChipConfig) -> ChipConfig {
        assert_eq!(self.counts.len(), other.counts.len());
        ChipConfig {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            absorbed: self.absorbed + other.absorbed,
        }
    }

    pub fn is_unstable_at(&self, g: &Graph, v: usize) -> bool {
        !g.is_sink(v) && self.counts[v] >= g.outdegree(v)
    }

    pub fn is_stable(&self, g: &Graph) -> bool {
        (0..g.vertex_count()).all(|v| !self.is_unstable_at(g, v))
    }

    /// Same counts with the absorbed tally reset.
    pub fn without_absorbed(&self) -> ChipConfig {
        ChipConfig {
            counts: self.counts.clone(),
            absorbed: 0,
        }
    }

    pub(crate) fn fire_times(&mut self, g: &Graph, v: usize, times: u64) {
        self.counts[v] -= times * g.outdegree(v);
        for &(t, m) in g.out_edges(v) {
            if g.is_sink(t) {
                self.absorbed += times * m;
            } else {
                self.counts[t] += times * m;
            }
        }
    }
}

/// Per-vertex firing counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Odometer {
    firings: Vec<u64>,
}

impl Odometer {
    pub fn zero(n: usize) -> Self {
        Odometer { firings: vec![0; n] }
    }

    pub fn get(&self, v: usize) -> u64 {
        self.firings[v]
    }

    pub fn firings(&self) -> &[u64] {
        &self.firings
    }

    pub fn total(&self) -> u64 {
        self.firings.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stabilized {
    pub config: ChipConfig,
    pub odometer: Odometer,
}

/// Fires `v` once.
pub fn fire(g: &Graph, c: &ChipConfig, v: usize) -> Result<ChipConfig, SandpileError> {
    if g.is_sink(v) {
        return Err(SandpileError::FireSink(g.name(v).to_string()));
    }
    let outdegree = g.outdegree(v);
    if c.counts[v] < outdegree {
        return Err(SandpileError::FireStable {
            vertex: g.name(v).to_string(),
            chips: c.counts[v],
            outdegree,
        });
    }
    let mut next = c.clone();
    next.fire_times(g, v, 1);
    Ok(next)
}

/// Stabilizes with the default work-queue schedule.
pub fn stabilize(g: &Graph, c: &ChipConfig, budget: u64) -> Result<Stabilized, SandpileError> {
    run_queue(g, c, budget, None)
}

/// Like [`stabilize`], also recording the configuration after every single firing.
pub fn stabilize_traced(
    g: &Graph,
    c: &ChipConfig,
    budget: u64,
) -> Result<(Stabilized, Trace), SandpileError> {
    let mut trace = Trace::new(c.clone());
    let st = run_queue(g, c, budget, Some(&mut trace))?;
    Ok((st, trace))
}

/// Work queue of unstable vertices; each pop fires its vertex
/// `floor(count / outdegree)` times. Initially unstable vertices are queued in
/// index order; after a firing, newly unstable targets are queued in index
/// order, then the fired vertex again if it is still unstable.
fn run_queue(
    g: &Graph,
    c: &ChipConfig,
    budget: u64,
    mut trace: Option<&mut Trace>,
) -> Result<Stabilized, SandpileError> {
    let n = g.vertex_count();
    let mut cfg = c.clone();
    let mut odo = Odometer::zero(n);
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for (v, q) in queued.iter_mut().enumerate() {
        if cfg.is_unstable_at(g, v) {
            *q = true;
            queue.push_back(v);
        }
    }
    let mut spent = 0u64;
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let d = g.outdegree(v);
        let batch = cfg.counts[v] / d;
        if batch == 0 {
            continue;
        }
        if spent + batch > budget {
            return Err(SandpileError::BudgetExceeded { budget });
        }
        spent += batch;
        match trace.as_deref_mut() {
            Some(t) => {
                for _ in 0..batch {
                    cfg.fire_times(g, v, 1);
                    t.push(cfg.clone());
                }
            }
            None => cfg.fire_times(g, v, batch),
        }
        odo.firings[v] += batch;
        for &(t, _) in g.out_edges(v) {
            if t != v && !queued[t] && cfg.is_unstable_at(g, t) {
                queued[t] = true;
                queue.push_back(t);
            }
        }
        if !queued[v] && cfg.is_unstable_at(g, v) {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    Ok(Stabilized {
        config: cfg,
        odometer: odo,
    })
}

/// Stabilizes by firing a uniformly random unstable vertex once per step.
pub fn stabilize_random_order<R: Rng>(
    g: &Graph,
    c: &ChipConfig,
    rng: &mut R,
    budget: u64,
) -> Result<Stabilized, SandpileError> {
    let n = g.vertex_count();
    let mut cfg = c.clone();
    let mut odo = Odometer::zero(n);
    let mut spent = 0u64;
    loop {
        let unstable: Vec<usize> = (0..n).filter(|&v| cfg.is_unstable_at(g, v)).collect();
        if unstable.is_empty() {
            break;
        }
        if spent == budget {
            return Err(SandpileError::BudgetExceeded { budget });
        }
        let v = unstable[rng.gen_range(0..unstable.len())];
        cfg.fire_times(g, v, 1);
        odo.firings[v] += 1;
        spent += 1;
    }
    Ok(Stabilized {
        config: cfg,
        odometer: odo,
    })
}

/// Sandpile-monoid addition: stabilization of the pointwise sum.
pub fn stable_add(
    g: &Graph,
    a: &ChipConfig,
    b: &ChipConfig,
    budget: u64,
) -> Result<ChipConfig, SandpileError> {
    for c in [a, b] {
        if let Some(v) = (0..g.vertex_count()).find(|&v| c.is_unstable_at(g, v)) {
            return Err(SandpileError::NotStable(g.name(v).to_string()));
        }
    }
    Ok(stabilize(g, &a.plus(b), budget)?.config)
}

/// Every stable configuration of a sandpile graph with its full addition table.
///
/// Elements are vectors over the non-sink vertices, listed in lexicographic
/// order, so the zero configuration is element 0.
pub fn sandpile_monoid(g: &Graph, max_elements: usize) -> Result<MonoidTable, SandpileError> {
    let sink = g.sandpile_sink().ok_or(SandpileError::NotSandpile)?;
    let live: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != sink).collect();
    let radix: Vec<u64> = live.iter().map(|&v| g.outdegree(v)).collect();
    let count = radix
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX);
    if count > max_elements as u128 {
        return Err(SandpileError::TooManyElements {
            count,
            cap: max_elements,
        });
    }
    let count = count as usize;
    let index_of = |vals: &[u64]| -> usize {
        vals.iter()
            .zip(&radix)
            .fold(0usize, |acc, (&x, &r)| acc * r as usize + x as usize)
    };
    let mut elements = Vec::with_capacity(count);
    let mut cur = vec![0u64; live.len()];
    for _ in 0..count {
        elements.push(cur.clone());
        for k in (0..cur.len()).rev() {
            cur[k] += 1;
            if cur[k] < radix[k] {
                break;
            }
            cur[k] = 0;
        }
    }
    let to_config = |vals: &[u64]| {
        let mut c = ChipConfig::zero(g);
        for (&v, &x) in live.iter().zip(vals) {
            c.counts[v] = x;
        }
        c
    };
    let restrict = |c: &ChipConfig| -> Vec<u64> { live.iter().map(|&v| c.counts[v]).collect() };
    let configs: Vec<ChipConfig> = elements.iter().map(|e| to_config(e)).collect();
    let mut addition = vec![vec![0usize; count]; count];
    for i in 0..count {
        for j in i..count {
            let sum = stabilize(g, &configs[i].plus(&configs[j]), DEFAULT_FIRING_BUDGET)?;
            let k = index_of(&restrict(&sum.config));
            addition[i][j] = k;
            addition[j][i] = k;
        }
    }
    let generator_elements = live
        .iter()
        .map(|&v| {
            let mut c = ChipConfig::zero(g);
            c.counts[v] = 1;
            stabilize(g, &c, DEFAULT_FIRING_BUDGET).map(|s| index_of(&restrict(&s.config)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonoidTable {
        generators: live.iter().map(|&v| g.name(v).to_string()).collect(),
        elements,
        generator_elements,
        addition,
        identity: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::*;
    use crate::graph::GraphBuilder;

    fn at(g: &Graph, c: &ChipConfig, name: &str) -> u64 {
        c.get(g.index_of(name).unwrap())
    }

    #[test]
    fn single_firing_on_chip_graph() {
        let g = chip_graph();
        let c = ChipConfig::from_pairs(&g, &[("v", 8)]).unwrap();
        let next = fire(&g, &c, g.index_of("v").unwrap()).unwrap();
        assert_eq!(at(&g, &next, "v"), 6);
        assert_eq!(at(&g, &next, "u"), 1);
        assert_eq!(next.absorbed(), 1);
    }

    #[test]
    fn firing_errors() {
        let g = chip_graph();
        let c = ChipConfig::zero(&g);
        assert!(matches!(fire(&g, &c, 0), Err(SandpileError::FireStable { .. })));
        assert!(matches!(fire(&g, &c, 3), Err(SandpileError::FireSink(_))));
        assert!(ChipConfig::from_pairs(&g, &[("s", 1)]).is_err());
    }

    #[test]
    fn stabilizes_eight_chips() {
        let g = chip_graph();
        let c = ChipConfig::from_pairs(&g, &[("v", 8)]).unwrap();
        let st = stabilize(&g, &c, DEFAULT_FIRING_BUDGET).unwrap();
        assert_eq!(st.config.counts(), &[1, 1, 1, 0]);
        assert_eq!(st.odometer.firings(), &[1, 4, 0, 0]);
        assert_eq!(st.config.absorbed(), 5);
    }

    #[test]
    fn zero_is_already_stable() {
        let g = chip_graph();
        let st = stabilize(&g, &ChipConfig::zero(&g), 10).unwrap();
        assert_eq!(st.config, ChipConfig::zero(&g));
        assert_eq!(st.odometer.total(), 0);
    }

    #[test]
    fn budget_guard_on_sinkless_graph() {
        let mut b = GraphBuilder::new();
        b.add_vertex("a");
        b.add_vertex("b");
        b.add_edge("a", "b", 1).unwrap();
        b.add_edge("b", "a", 1).unwrap();
        let g = b.build().unwrap();
        let c = ChipConfig::from_pairs(&g, &[("a", 1)]).unwrap();
        assert_eq!(
            stabilize(&g, &c, 1000),
            Err(SandpileError::BudgetExceeded { budget: 1000 })
        );
    }

    #[test]
    fn stable_add_examples() {
        let g = golden_with_sink();
        let x = ChipConfig::from_pairs(&g, &[("v", 1)]).unwrap();
        let sum = stable_add(&g, &x, &x, 100).unwrap();
        assert_eq!(sum, ChipConfig::from_pairs(&g, &[("u", 1)]).unwrap().plus(&absorbed(1)));
        assert_eq!(stable_add(&g, &x, &ChipConfig::zero(&g), 100).unwrap(), x);
        let three = ChipConfig::from_pairs(&g, &[("u", 1), ("v", 1)]).unwrap();
        let four = stable_add(&g, &three, &x, 100).unwrap();
        assert_eq!(four.without_absorbed(), three);
    }

    fn absorbed(n: u64) -> ChipConfig {
        ChipConfig {
            counts: vec![0; 3],
            absorbed: n,
        }
    }

    #[test]
    fn monoid_of_golden_with_sink() {
        let t = sandpile_monoid(&golden_with_sink(), 100).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.check_laws());
        let x = t.generator_elements[1];
        let two = t.add(x, x);
        let three = t.add(two, x);
        assert_eq!(t.add(three, x), three);
        assert_ne!(two, three);
    }

    #[test]
    fn monoid_sizes() {
        let mut b = GraphBuilder::new();
        b.add_vertex("v");
        b.add_vertex("s");
        b.add_edge("v", "s", 1).unwrap();
        let t = sandpile_monoid(&b.build().unwrap(), 10).unwrap();
        assert_eq!(t.len(), 1);
        let t = sandpile_monoid(&chip_graph(), 100).unwrap();
        assert_eq!(t.len(), 27);
        assert!(matches!(
            sandpile_monoid(&chip_graph(), 26),
            Err(SandpileError::TooManyElements { count: 27, .. })
        ));
        assert!(matches!(sandpile_monoid(&rose(2), 10), Err(SandpileError::NotSandpile)));
    }
}
