//! Finite directed multigraphs with ordered vertices.
//!
//! Parallel edges are stored as multiplicities. Vertex order is declaration
//! order and every matrix, report and serialization follows it.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::matrix::{IntMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: undeclared vertex `{name}`")]
    UndeclaredVertex { name: String, line: usize },
    #[error("line {line}: duplicate vertex `{name}`")]
    DuplicateVertex { name: String, line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("vertex `{0}` has no weight (weights must cover every vertex once any is given)")]
    MissingWeight(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("graph has no vertices")]
    Empty,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Out-edges per vertex as (target, multiplicity), sorted by target.
    out: Vec<Vec<(usize, u64)>>,
    weights: Option<Vec<u64>>,
}

/// Incremental construction of a [`Graph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<HashMap<usize, u64>>,
    weights: HashMap<usize, u64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the new vertex index, or `None` when the name is taken.
    pub fn add_vertex(&mut self, name: &str) -> Option<usize> {
        if self.index.contains_key(name) {
            return None;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.edges.push(HashMap::new());
        Some(i)
    }

    pub fn add_edge_by_index(&mut self, src: usize, dst: usize, mult: u64) {
        assert!(src < self.names.len() && dst < self.names.len());
        if mult > 0 {
            *self.edges[src].entry(dst).or_insert(0) += mult;
        }
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, mult: u64) -> Result<(), GraphError> {
        if mult == 0 {
            return Err(GraphError::ZeroMultiplicity);
        }
        let s = self.lookup(src)?;
        let d = self.lookup(dst)?;
        self.add_edge_by_index(s, d, mult);
        Ok(())
    }

    pub fn set_weight(&mut self, name: &str, w: u64) -> Result<(), GraphError> {
        let i = self.lookup(name)?;
        self.weights.insert(i, w);
        Ok(())
    }

    fn lookup(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        if self.names.is_empty() {
            return Err(GraphError::Empty);
        }
        let weights = if self.weights.is_empty() {
            None
        } else {
            let mut w = Vec::with_capacity(self.names.len());
            for (i, name) in self.names.iter().enumerate() {
                w.push(
                    *self
                        .weights
                        .get(&i)
                        .ok_or_else(|| GraphError::MissingWeight(name.clone()))?,
                );
            }
            Some(w)
        };
        let out = self
            .edges
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, u64)> = m.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        Ok(Graph {
            names: self.names,
            index: self.index,
            out,
            weights,
        })
    }
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Out-edges of `v` as (target, multiplicity), sorted by target index.
    pub fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        &self.out[v]
    }

    pub fn outdegree(&self, v: usize) -> u64 {
        self.out[v].iter().map(|&(_, m)| m).sum()
    }

    pub fn multiplicity(&self, src: usize, dst: usize) -> u64 {
        self.out[src]
            .binary_search_by_key(&dst, |&(t, _)| t)
            .map_or(0, |k| self.out[src][k].1)
    }

    pub fn loops(&self, v: usize) -> u64 {
        self.multiplicity(v, v)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out[v].is_empty()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_sink(v)).collect()
    }

    /// Total number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        (0..self.vertex_count()).map(|v| self.outdegree(v)).sum()
    }

    pub fn indegrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.vertex_count()];
        for edges in &self.out {
            for &(t, m) in edges {
                d[t] += m;
            }
        }
        d
    }

    pub fn weights(&self) -> Option<&[u64]> {
        self.weights.as_deref()
    }

    /// The declared weight, falling back to the vertex weighting `w(v) = outdegree(v)`.
    pub fn weight(&self, v: usize) -> u64 {
        self.weights
            .as_ref()
            .map_or_else(|| self.outdegree(v), |w| w[v])
    }

    pub fn with_weights(&self, weights: Vec<u64>) -> Graph {
        assert_eq!(weights.len(), self.vertex_count());
        Graph {
            weights: Some(weights),
            ..self.clone()
        }
    }

    /// Parses the line-oriented graph format (`v`, `e`, `w` records; `#` comments).
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new();
        let mut pending_edges = Vec::new();
        let mut pending_weights = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let malformed = |message: &str| GraphError::Malformed {
                line,
                message: message.to_string(),
            };
            match toks[0] {
                "v" => {
                    if toks.len() != 2 {
                        return Err(malformed("expected `v <name>`"));
                    }
                    if b.add_vertex(toks[1]).is_none() {
                        return Err(GraphError::DuplicateVertex {
                            name: toks[1].to_string(),
                            line,
                        });
                    }
                }
                "e" => {
                    if !(3..=4).contains(&toks.len()) {
                        return Err(malformed("expected `e <src> <dst> [mult]`"));
                    }
                    let mult = match toks.get(3) {
                        Some(t) => t
                            .parse::<u64>()
                            .map_err(|_| malformed("multiplicity must be a positive integer"))?,
                        None => 1,
                    };
                    if mult == 0 {
                        return Err(malformed("multiplicity must be a positive integer"));
                    }
                    pending_edges.push((line, toks[1].to_string(), toks[2].to_string(), mult));
                }
                "w" => {
                    if toks.len() != 3 {
                        return Err(malformed("expected `w <name> <int>`"));
                    }
                    let w = toks[2]
                        .parse::<u64>()
                        .map_err(|_| malformed("weight must be a nonnegative integer"))?;
                    pending_weights.push((line, toks[1].to_string(), w));
                }
                other => return Err(malformed(&format!("unknown record type `{other}`"))),
            }
        }
        let undeclared = |name: &str, line: usize| GraphError::UndeclaredVertex {
            name: name.to_string(),
            line,
        };
        for (line, src, dst, mult) in pending_edges {
            let s = b.index.get(&src).copied().ok_or_else(|| undeclared(&src, line))?;
            let d = b.index.get(&dst).copied().ok_or_else(|| undeclared(&dst, line))?;
            b.add_edge_by_index(s, d, mult);
        }
        for (line, name, w) in pending_weights {
            if !b.index.contains_key(&name) {
                return Err(undeclared(&name, line));
            }
            b.set_weight(&name, w)?;
        }
        b.build()
    }

    /// Serializes to the graph file format; `Graph::parse` reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for name in &self.names {
            writeln!(s, "v {name}").unwrap();
        }
        for (v, edges) in self.out.iter().enumerate() {
            for &(t, m) in edges {
                if m == 1 {
                    writeln!(s, "e {} {}", self.names[v], self.names[t]).unwrap();
                } else {
                    writeln!(s, "e {} {} {}", self.names[v], self.names[t], m).unwrap();
                }
            }
        }
        if let Some(w) = &self.weights {
            for (name, x) in self.names.iter().zip(w) {
                writeln!(s, "w {name} {x}").unwrap();
            }
        }
        s
    }

    /// Entry (i, j) counts the edges from vertex i to vertex j.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut a = IntMatrix::zeros(n, n);
        for (v, edges) in self.out.iter().enumerate() {
            for &(t, m) in edges {
                a.set(v, t, BigInt::from(m));
            }
        }
        a
    }

    /// Inverse of [`Graph::adjacency_matrix`]; vertices are named `v1..vn`.
    pub fn from_matrix(a: &IntMatrix) -> Result<Graph, GraphError> {
        if !a.is_square() {
            return Err(MatrixError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            }
            .into());
        }
        if let Some((i, j)) = a.first_negative() {
            return Err(MatrixError::NegativeEntry { row: i + 1, col: j + 1 }.into());
        }
        let n = a.rows();
        let mut b = GraphBuilder::new();
        for i in 1..=n {
            b.add_vertex(&format!("v{i}"));
        }
        for i in 0..n {
            for j in 0..n {
                let m = a.get(i, j).to_u64().ok_or_else(|| {
                    GraphError::Matrix(MatrixError::Shape(format!(
                        "entry at ({},{}) exceeds the supported multiplicity range",
                        i + 1,
                        j + 1
                    )))
                })?;
                b.add_edge_by_index(i, j, m);
            }
        }
        b.build()
    }

    /// Vertices reachable from `start` by directed paths (including `start`).
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &(t, _) in &self.out[v] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Vertices from which `target` is reachable (including `target`).
    pub fn reaching(&self, target: usize) -> Vec<bool> {
        let n = self.vertex_count();
        let mut rev = vec![Vec::new(); n];
        for (v, edges) in self.out.iter().enumerate() {
            for &(t, _) in edges {
                rev[t].push(v);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([target]);
        seen[target] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &rev[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Strongly connected components; each sorted by index, listed by smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        // iterative Tarjan: (vertex, next out-edge position)
        let mut call: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            call.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&(w, _)) = self.out[v].get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// True when some cycle lives inside the component (size > 1, or a loop).
    pub fn component_has_cycle(&self, comp: &[usize]) -> bool {
        comp.len() > 1 || self.loops(comp[0]) > 0
    }

    pub fn structure_report(&self) -> StructureReport {
        let sinks = self.sinks();
        let comps = self.strongly_connected_components();
        let sandpile_sink = match sinks[..] {
            [s] => self.reaching(s).iter().all(|&r| r).then_some(s),
            _ => None,
        };
        StructureReport {
            sinks: sinks.iter().map(|&s| self.names[s].clone()).collect(),
            strongly_connected: comps.len() <= 1,
            scc_partition: comps
                .iter()
                .map(|c| c.iter().map(|&v| self.names[v].clone()).collect())
                .collect(),
            sandpile: sandpile_sink.is_some(),
            sandpile_sink: sandpile_sink.map(|s| self.names[s].clone()),
            outdegrees: (0..self.vertex_count()).map(|v| self.outdegree(v)).collect(),
            indegrees: self.indegrees(),
        }
    }

    /// The unique sink when this is a sandpile graph.
    pub fn sandpile_sink(&self) -> Option<usize> {
        match self.sinks()[..] {
            [s] if self.reaching(s).iter().all(|&r| r) => Some(s),
            _ => None,
        }
    }

    /// Some cycle all of whose vertices have outdegree exactly 1, if one exists.
    ///
    /// A cycle has no exit precisely when each of its vertices emits only the
    /// cycle edge, so only the functional subgraph of outdegree-1 vertices
    /// needs to be searched. The witness starts at its smallest vertex.
    pub fn exitless_cycle(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let succ = |v: usize| -> Option<usize> {
            match self.out[v][..] {
                [(t, 1)] => Some(t),
                _ => None,
            }
        };
        // 0 = unvisited, 1 = on current walk, 2 = finished
        let mut state = vec![0u8; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut walk = Vec::new();
            let mut cur = Some(start);
            while let Some(v) = cur {
                match state[v] {
                    0 => {
                        state[v] = 1;
                        walk.push(v);
                        cur = succ(v);
                    }
                    1 => {
                        let pos = walk.iter().position(|&w| w == v).expect("on walk");
                        let mut cycle = walk[pos..].to_vec();
                        let min_pos = cycle
                            .iter()
                            .enumerate()
                            .min_by_key(|&(_, &x)| x)
                            .map(|(i, _)| i)
                            .unwrap_or(0);
                        cycle.rotate_left(min_pos);
                        return Some(cycle);
                    }
                    _ => break,
                }
            }
            for v in walk {
                state[v] = 2;
            }
        }
        None
    }

    pub fn every_cycle_has_exit(&self) -> CycleExitReport {
        let witness = self.exitless_cycle();
        CycleExitReport {
            every_cycle_has_exit: witness.is_none(),
            witness: witness.map(|c| c.iter().map(|&v| self.names[v].clone()).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub sinks: Vec<String>,
    pub strongly_connected: bool,
    pub scc_partition: Vec<Vec<String>>,
    pub sandpile: bool,
    pub sandpile_sink: Option<String>,
    pub outdegrees: Vec<u64>,
    pub indegrees: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleExitReport {
    pub every_cycle_has_exit: bool,
    /// Vertices of an exit-less cycle, in cycle order.
    pub witness: Option<Vec<String>>,
}

/// Small named graphs used throughout the tests, docs and CLI fixtures.
pub mod examples {
    use super::{Graph, GraphBuilder};

    fn build(vertices: &[&str], edges: &[(&str, &str, u64)]) -> Graph {
        let mut b = GraphBuilder::new();
        for v in vertices {
            b.add_vertex(v).expect("distinct names");
        }
        for &(s, d, m) in edges {
            b.add_edge(s, d, m).expect("declared endpoints");
        }
        b.build().expect("valid graph")
    }

    /// The four-vertex chip-firing graph: u, v, z each emit three edges, s is the sink.
    pub fn chip_graph() -> Graph {
        build(
            &["u", "v", "z", "s"],
            &[
                ("u", "s", 1),
                ("u", "v", 1),
                ("u", "z", 1),
                ("v", "s", 1),
                ("v", "v", 1),
                ("v", "u", 1),
                ("z", "s", 1),
                ("z", "z", 1),
                ("z", "u", 1),
            ],
        )
    }

    /// u with a loop and an edge to v; v with an edge back to u. Adjacency [[1,1],[1,0]].
    pub fn golden_graph() -> Graph {
        build(&["u", "v"], &[("u", "u", 1), ("u", "v", 1), ("v", "u", 1)])
    }

    /// [`golden_graph`] plus an edge from v to a new sink s.
    pub fn golden_with_sink() -> Graph {
        build(
            &["u", "v", "s"],
            &[("u", "u", 1), ("u", "v", 1), ("v", "u", 1), ("v", "s", 1)],
        )
    }

    /// Three vertices, each with a loop: a->b, b->c, c->a, c->b.
    pub fn triangle_with_loops() -> Graph {
        build(
            &["a", "b", "c"],
            &[
                ("a", "a", 1),
                ("a", "b", 1),
                ("b", "b", 1),
                ("b", "c", 1),
                ("c", "c", 1),
                ("c", "b", 1),
                ("c", "a", 1),
            ],
        )
    }

    pub fn rose(petals: u64) -> Graph {
        build(&["v"], &[("v", "v", petals)])
    }

    /// An edge into a 2-cycle whose vertices emit nothing else.
    pub fn tail_into_bare_cycle() -> Graph {
        build(&["x", "y", "z"], &[("x", "y", 1), ("y", "z", 1), ("z", "y", 1)])
    }

    /// A 2-cycle with an edge out to a sink.
    pub fn cycle_to_sink() -> Graph {
        build(&["x", "y", "z"], &[("x", "y", 1), ("y", "x", 1), ("y", "z", 1)])
    }
}
