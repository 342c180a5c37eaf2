//! Finite windows of the talented monoid.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::monoid::{MonoidError, MonoidPresentation, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("shifting leaves the window of radius {radius}")]
    OutsideWindow { radius: usize },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// Generators `v(i)` for every vertex `v` and `-k <= i <= k`, listed vertex by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TalentedWindow {
    pub vertices: Vec<String>,
    pub radius: usize,
    pub presentation: MonoidPresentation,
}

impl TalentedWindow {
    fn width(&self) -> usize {
        2 * self.radius + 1
    }

    /// Generator index of `v(i)`, if `i` lies in the window.
    pub fn index(&self, v: usize, i: i64) -> Option<usize> {
        let k = self.radius as i64;
        (v < self.vertices.len() && (-k..=k).contains(&i)).then(|| v * self.width() + (i + k) as usize)
    }

    /// Applies the action `v(i) -> v(i + steps)` to an element of the window.
    pub fn shift(&self, x: &[u64], steps: i64) -> Result<Vec<u64>, WindowError> {
        self.presentation.check_element(x)?;
        let k = self.radius as i64;
        let w = self.width();
        let mut out = vec![0; x.len()];
        for (g, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (v, i) = (g / w, (g % w) as i64 - k);
            let target = self
                .index(v, i + steps)
                .ok_or(WindowError::OutsideWindow { radius: self.radius })?;
            out[target] = c;
        }
        Ok(out)
    }
}

fn generator_name(v: &str, i: i64) -> String {
    format!("{v}({i})")
}

/// Relations `v(i) = Σ r(e)(i+1)` for every non-sink `v` and `-k <= i < k`.
pub fn talented_window(g: &Graph, k: usize) -> Result<TalentedWindow, WindowError> {
    let ki = k as i64;
    let mut generators = Vec::new();
    for v in 0..g.vertex_count() {
        for i in -ki..=ki {
            generators.push(generator_name(g.name(v), i));
        }
    }
    let width = 2 * k + 1;
    let at = |v: usize, i: i64| v * width + (i + ki) as usize;
    let mut relations = Vec::new();
    for v in 0..g.vertex_count() {
        if g.is_sink(v) {
            continue;
        }
        for i in -ki..ki {
            let mut lhs = vec![0u64; generators.len()];
            lhs[at(v, i)] = 1;
            let mut rhs = vec![0u64; generators.len()];
            for &(t, m) in g.out_edges(v) {
                rhs[at(t, i + 1)] += m;
            }
            relations.push(Relation { lhs, rhs });
        }
    }
    Ok(TalentedWindow {
        vertices: g.names().to_vec(),
        radius: k,
        presentation: MonoidPresentation::new(generators, relations)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::{golden_graph, rose};
    use crate::monoid::{words_equal, WordVerdict};

    #[test]
    fn rose_window() {
        let w = talented_window(&rose(2), 1).unwrap();
        let p = &w.presentation;
        assert_eq!(p.generators(), ["v(-1)", "v(0)", "v(1)"]);
        assert_eq!(p.to_text(), "gens: v(-1) v(0) v(1)\nv(-1) = 2v(0)\nv(0) = 2v(1)\n");
    }

    #[test]
    fn sink_has_no_relations() {
        let g = Graph::parse("v s\n").unwrap();
        let w = talented_window(&g, 3).unwrap();
        assert_eq!(w.presentation.rank(), 7);
        assert!(w.presentation.relations().is_empty());
    }

    #[test]
    fn radius_zero_has_no_relations() {
        let w = talented_window(&golden_graph(), 0).unwrap();
        assert_eq!(w.presentation.generators(), ["u(0)", "v(0)"]);
        assert!(w.presentation.relations().is_empty());
    }

    #[test]
    fn rose_window_equalities() {
        let w = talented_window(&rose(2), 1).unwrap();
        let p = &w.presentation;
        for (lhs, rhs) in [("v(0)", "2v(1)"), ("v(-1)", "4v(1)")] {
            let x = p.parse_term(lhs).unwrap();
            let y = p.parse_term(rhs).unwrap();
            assert!(matches!(words_equal(p, &x, &y, 6), WordVerdict::Yes { .. }));
        }
    }

    #[test]
    fn shift_moves_stage() {
        let w = talented_window(&golden_graph(), 1).unwrap();
        let p = &w.presentation;
        let x = p.parse_term("u(-1)+2v(0)").unwrap();
        assert_eq!(w.shift(&x, 1).unwrap(), p.parse_term("u(0)+2v(1)").unwrap());
        assert_eq!(w.shift(&x, 0).unwrap(), x);
        assert_eq!(w.shift(&x, 2), Err(WindowError::OutsideWindow { radius: 1 }));
    }
}
