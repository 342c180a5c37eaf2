//! Rectangular grids and a flat-array stabilizer for them.

use serde::{Deserialize, Serialize};

use super::{ChipConfig, Odometer, SandpileError, Stabilized};
use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridMode {
    /// Chips are conserved; a cell fires once it holds its grid degree.
    Closed,
    /// Boundary cells also shed to an implicit sink, so every cell fires at 4.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub mode: GridMode,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize, mode: GridMode) -> Self {
        assert!(rows >= 1 && cols >= 1, "grid dimensions must be positive");
        GridSpec { rows, cols, mode }
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    pub fn cell(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn cell_name(row: usize, col: usize) -> String {
        format!("{row},{col}")
    }

    fn grid_degree(&self, row: usize, col: usize) -> u64 {
        u64::from(row > 0) + u64::from(row + 1 < self.rows) + u64::from(col > 0) + u64::from(col + 1 < self.cols)
    }

    /// Firing threshold of a cell (0 means it is a sink and never fires).
    pub fn threshold(&self, row: usize, col: usize) -> u64 {
        match self.mode {
            GridMode::Closed => self.grid_degree(row, col),
            GridMode::Open => 4,
        }
    }

    fn neighbours(&self, row: usize, col: usize) -> impl Iterator<Item = usize> + '_ {
        let up = (row > 0).then(|| self.cell(row - 1, col));
        let down = (row + 1 < self.rows).then(|| self.cell(row + 1, col));
        let left = (col > 0).then(|| self.cell(row, col - 1));
        let right = (col + 1 < self.cols).then(|| self.cell(row, col + 1));
        [up, down, left, right].into_iter().flatten()
    }

    /// Places `n` chips on a cell of a configuration over [`make_grid`]'s graph.
    pub fn place(
        &self,
        g: &Graph,
        c: &mut ChipConfig,
        row: usize,
        col: usize,
        n: u64,
    ) -> Result<(), SandpileError> {
        if row >= self.rows || col >= self.cols {
            return Err(SandpileError::OffGrid {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        c.add_chips(g, self.cell(row, col), n)
    }
}

/// Cell (r, c) becomes vertex `r * cols + c`, named `"r,c"`. Open grids get one
/// extra vertex `sink` receiving each boundary cell's missing neighbours.
pub fn make_grid(spec: &GridSpec) -> Graph {
    let mut b = GraphBuilder::new();
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            b.add_vertex(&GridSpec::cell_name(r, c));
        }
    }
    let sink = match spec.mode {
        GridMode::Open => b.add_vertex("sink"),
        GridMode::Closed => None,
    };
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            let v = spec.cell(r, c);
            for t in spec.neighbours(r, c) {
                b.add_edge_by_index(v, t, 1);
            }
            if let Some(s) = sink {
                b.add_edge_by_index(v, s, 4 - spec.grid_degree(r, c));
            }
        }
    }
    b.build().expect("grid has at least one cell")
}

/// Result of [`stabilize_grid`], in cell order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridState {
    pub cells: Vec<u64>,
    pub odometer: Vec<u64>,
    pub absorbed: u64,
}

impl GridState {
    /// The same data as a generic stabilization over [`make_grid`]'s graph.
    pub fn to_stabilized(&self, spec: &GridSpec) -> Stabilized {
        let extra = usize::from(spec.mode == GridMode::Open);
        let mut counts = self.cells.clone();
        let mut firings = self.odometer.clone();
        counts.resize(spec.cells() + extra, 0);
        firings.resize(spec.cells() + extra, 0);
        Stabilized {
            config: ChipConfig {
                counts,
                absorbed: self.absorbed,
            },
            odometer: Odometer { firings },
        }
    }
}

/// Stabilizes chip counts on a grid without building the graph.
///
/// Produces exactly what [`super::stabilize`] produces on [`make_grid`]'s
/// graph. Cells are topple-batched from a stack of unstable cells.
pub fn stabilize_grid(spec: &GridSpec, cells: &[u64], budget: u64) -> Result<GridState, SandpileError> {
    assert_eq!(cells.len(), spec.cells(), "one count per cell");
    let (rows, cols) = (spec.rows, spec.cols);
    let mut thresholds = Vec::with_capacity(spec.cells());
    for r in 0..rows {
        for c in 0..cols {
            thresholds.push(spec.threshold(r, c));
        }
    }
    if let Some(k) = (0..cells.len()).find(|&k| thresholds[k] == 0 && cells[k] > 0) {
        return Err(SandpileError::ChipsOnSink(GridSpec::cell_name(k / cols, k % cols)));
    }
    let mut grid = cells.to_vec();
    let mut odometer = vec![0u64; grid.len()];
    let mut absorbed = 0u64;
    let mut spent = 0u64;
    let mut pending = vec![false; grid.len()];
    let mut stack: Vec<usize> = Vec::new();
    for k in 0..grid.len() {
        if thresholds[k] > 0 && grid[k] >= thresholds[k] {
            pending[k] = true;
            stack.push(k);
        }
    }
    let open = spec.mode == GridMode::Open;
    while let Some(k) = stack.pop() {
        pending[k] = false;
        let th = thresholds[k];
        let batch = grid[k] / th;
        if batch == 0 {
            continue;
        }
        if spent + batch > budget {
            return Err(SandpileError::BudgetExceeded { budget });
        }
        spent += batch;
        grid[k] -= batch * th;
        odometer[k] += batch;
        let (r, c) = (k / cols, k % cols);
        let mut sent = 0;
        for t in spec.neighbours(r, c) {
            grid[t] += batch;
            sent += 1;
            if !pending[t] && grid[t] >= thresholds[t] {
                pending[t] = true;
                stack.push(t);
            }
        }
        if open {
            absorbed += batch * (4 - sent);
        }
    }
    Ok(GridState {
        cells: grid,
        odometer,
        absorbed,
    })
}
