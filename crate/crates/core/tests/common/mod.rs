#![allow(dead_code)]

use monodyn::graph::{Graph, GraphBuilder};
use rand::Rng;

/// Graph on `v0..v{n-1}` from a row-major multiplicity list.
pub fn graph_from_mults(n: usize, mults: &[u64]) -> Graph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_vertex(&format!("v{i}"));
    }
    for i in 0..n {
        for j in 0..n {
            if mults[i * n + j] > 0 {
                b.add_edge_by_index(i, j, mults[i * n + j]);
            }
        }
    }
    b.build().unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_mult: u64) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let density: f64 = rng.gen_range(0.15..0.6);
    let mults: Vec<u64> = (0..n * n)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(1..=max_mult) } else { 0 })
        .collect();
    graph_from_mults(n, &mults)
}

/// Reflexive-transitive closure by Floyd–Warshall.
#[allow(clippy::needless_range_loop)]
pub fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut c = vec![vec![false; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = true;
        for &(t, _) in g.out_edges(i) {
            row[t] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if c[i][k] {
                for j in 0..n {
                    if c[k][j] {
                        c[i][j] = true;
                    }
                }
            }
        }
    }
    c
}

/// Vertices lying on some cycle (a path of positive length back to themselves).
pub fn on_cycle(g: &Graph) -> Vec<bool> {
    let c = closure(g);
    (0..g.vertex_count())
        .map(|v| g.out_edges(v).iter().any(|&(t, _)| c[t][v]))
        .collect()
}

/// Every simple cycle as a vertex sequence starting at its least vertex.
pub fn simple_cycles(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, start: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        for &(t, _) in g.out_edges(last) {
            if t == start {
                out.push(path.clone());
            } else if t > start && !path.contains(&t) {
                path.push(t);
                extend(g, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        extend(g, s, &mut vec![s], &mut out);
    }
    out
}

/// A simple cycle visits each of its vertices once, so it has an exit exactly
/// when one of its vertices has more than one outgoing edge.
pub fn brute_every_cycle_has_exit(g: &Graph) -> bool {
    simple_cycles(g).iter().all(|cyc| cyc.iter().any(|&v| g.outdegree(v) > 1))
}

pub fn brute_cofinal(g: &Graph) -> bool {
    let c = closure(g);
    let cyc = on_cycle(g);
    let n = g.vertex_count();
    (0..n).all(|u| (0..n).filter(|&v| g.is_sink(v) || cyc[v]).all(|v| c[u][v]))
}

/// A sandpile graph on `v0..` plus sink `s`: every non-sink vertex has
/// outdegree 1..=max_out and reaches the sink.
pub fn random_sandpile_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_out: u64) -> Graph {
    loop {
        let live = rng.gen_range(1..max_vertices);
        let n = live + 1;
        let mut mults = vec![0u64; n * n];
        for v in 0..live {
            let deg = rng.gen_range(1..=max_out);
            for _ in 0..deg {
                mults[v * n + rng.gen_range(0..n)] += 1;
            }
        }
        let g = graph_from_mults(n, &mults);
        if g.sandpile_sink() == Some(live) {
            return g;
        }
    }
}
