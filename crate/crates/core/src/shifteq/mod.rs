//! Elementary, strong and plain shift equivalence of nonnegative integer
//! matrices: witness checking, invariants, and bounded witness search.

mod perm;
mod search;

pub use perm::{canonical_form, conjugate, find_conjugating, permutations};
pub use search::{se_search, sse_search, SeOutcome, SseBounds, SseOutcome};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::matrix::{IntMatrix, MatrixError};
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("lag must be positive")]
    ZeroLag,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `A = RS`, `B = SR`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ESWitness {
    pub r: IntMatrix,
    pub s: IntMatrix,
}

/// `A^lag = RS`, `B^lag = SR`, `AR = RB`, `SA = BS`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SEWitness {
    pub r: IntMatrix,
    pub s: IntMatrix,
    pub lag: u32,
}

/// `matrices[i] = links[i].r · links[i].s` and `links[i].s · links[i].r = matrices[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SSEChain {
    pub matrices: Vec<IntMatrix>,
    pub links: Vec<ESWitness>,
}

impl SSEChain {
    pub fn trivial(a: IntMatrix) -> Self {
        SSEChain {
            matrices: vec![a],
            links: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Blocks separated by blank lines: `A0`, `R0`, `S0`, `A1`, ..., `Ak`.
    pub fn to_text(&self) -> String {
        let mut blocks = Vec::new();
        for (i, m) in self.matrices.iter().enumerate() {
            blocks.push(m.to_text());
            if let Some(l) = self.links.get(i) {
                blocks.push(l.r.to_text());
                blocks.push(l.s.to_text());
            }
        }
        blocks.join("\n")
    }

    pub fn parse(text: &str) -> Result<Self, ShiftError> {
        let blocks = split_blocks(text)
            .iter()
            .map(|b| IntMatrix::parse(b))
            .collect::<Result<Vec<_>, _>>()?;
        if blocks.len() % 3 != 1 {
            return Err(ShiftError::Shape(format!(
                "a chain file holds 3k+1 matrices, found {}",
                blocks.len()
            )));
        }
        let mut matrices = Vec::new();
        let mut links = Vec::new();
        let mut it = blocks.into_iter();
        matrices.push(it.next().expect("at least one block"));
        while let (Some(r), Some(s), Some(m)) = (it.next(), it.next(), it.next()) {
            links.push(ESWitness { r, s });
            matrices.push(m);
        }
        Ok(SSEChain { matrices, links })
    }
}

/// Splits text into blank-line separated chunks, ignoring comment-only lines.
pub fn split_blocks(text: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.trim().is_empty() {
                blocks.push(std::mem::take(&mut cur));
            }
            cur.clear();
        } else {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.trim().is_empty() {
        blocks.push(cur);
    }
    blocks
}

fn require_square(m: &IntMatrix) -> Result<usize, ShiftError> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(ShiftError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

fn expect_shape(what: &str, m: &IntMatrix, shape: (usize, usize)) -> Result<(), ShiftError> {
    if m.shape() == shape {
        Ok(())
    } else {
        Err(ShiftError::Shape(format!(
            "{what} is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            shape.0,
            shape.1
        )))
    }
}

pub fn verify_elementary(a: &IntMatrix, b: &IntMatrix, w: &ESWitness) -> Result<bool, ShiftError> {
    let n = require_square(a)?;
    let m = require_square(b)?;
    expect_shape("R", &w.r, (n, m))?;
    expect_shape("S", &w.s, (m, n))?;
    if !(w.r.is_nonnegative() && w.s.is_nonnegative()) {
        return Ok(false);
    }
    Ok(&(&w.r * &w.s) == a && &(&w.s * &w.r) == b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub valid: bool,
    /// Index into `matrices` of the first matrix that does not match its link.
    pub failing_index: Option<usize>,
}

pub fn verify_sse_chain(chain: &SSEChain) -> ChainCheck {
    let fail = |i| ChainCheck {
        valid: false,
        failing_index: Some(i),
    };
    if chain.matrices.is_empty() {
        return fail(0);
    }
    if chain.links.len() + 1 != chain.matrices.len() {
        return fail(chain.links.len().min(chain.matrices.len()));
    }
    for (i, link) in chain.links.iter().enumerate() {
        let (a, b) = (&chain.matrices[i], &chain.matrices[i + 1]);
        let nonneg = link.r.is_nonnegative() && link.s.is_nonnegative();
        let rs = link.r.checked_mul(&link.s).ok();
        if !nonneg || !a.is_square() || rs.as_ref() != Some(a) {
            return fail(i);
        }
        let sr = link.s.checked_mul(&link.r).ok();
        if !b.is_square() || sr.as_ref() != Some(b) {
            return fail(i + 1);
        }
    }
    ChainCheck {
        valid: true,
        failing_index: None,
    }
}

pub fn verify_se(a: &IntMatrix, b: &IntMatrix, w: &SEWitness) -> Result<bool, ShiftError> {
    let n = require_square(a)?;
    let m = require_square(b)?;
    expect_shape("R", &w.r, (n, m))?;
    expect_shape("S", &w.s, (m, n))?;
    if w.lag == 0 {
        return Err(ShiftError::ZeroLag);
    }
    if !(w.r.is_nonnegative() && w.s.is_nonnegative()) {
        return Ok(false);
    }
    Ok(a.pow(w.lag)? == &w.r * &w.s
        && b.pow(w.lag)? == &w.s * &w.r
        && a * &w.r == &w.r * b
        && &w.s * a == b * &w.s)
}

/// The cokernel of `I - A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BowenFranks {
    /// Invariant factors greater than 1, in divisibility order.
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl std::fmt::Display for BowenFranks {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixInvariants {
    pub bowen_franks: BowenFranks,
    /// Characteristic polynomial with every factor of `t` removed, leading coefficient first.
    pub charpoly_core: Vec<BigInt>,
}

pub fn matrix_invariants(a: &IntMatrix) -> Result<MatrixInvariants, ShiftError> {
    let n = require_square(a)?;
    let snf = smith_normal_form(&(&IntMatrix::identity(n) - a));
    let mut charpoly_core = a.charpoly()?;
    while charpoly_core.len() > 1 && charpoly_core.last().is_some_and(Zero::is_zero) {
        charpoly_core.pop();
    }
    Ok(MatrixInvariants {
        bowen_franks: BowenFranks {
            invariant_factors: snf.torsion(),
            free_rank: snf.cokernel_free_rank(),
        },
        charpoly_core,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InvariantVerdict {
    Obstruction { differing: Vec<String> },
    NoObstruction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub a: MatrixInvariants,
    pub b: MatrixInvariants,
    pub verdict: InvariantVerdict,
}

impl InvariantReport {
    pub fn is_obstruction(&self) -> bool {
        matches!(self.verdict, InvariantVerdict::Obstruction { .. })
    }
}

/// Bowen–Franks groups and nonzero spectra; a difference in either rules out
/// shift equivalence.
pub fn invariants_report(a: &IntMatrix, b: &IntMatrix) -> Result<InvariantReport, ShiftError> {
    let ia = matrix_invariants(a)?;
    let ib = matrix_invariants(b)?;
    let mut differing = Vec::new();
    if ia.bowen_franks != ib.bowen_franks {
        differing.push("bowen_franks".to_string());
    }
    if ia.charpoly_core != ib.charpoly_core {
        differing.push("charpoly_core".to_string());
    }
    let verdict = if differing.is_empty() {
        InvariantVerdict::NoObstruction
    } else {
        InvariantVerdict::Obstruction { differing }
    };
    Ok(InvariantReport { a: ia, b: ib, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::format_poly;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn example() -> (IntMatrix, IntMatrix, ESWitness) {
        (
            m(&[vec![2]]),
            m(&[vec![1, 1], vec![1, 1]]),
            ESWitness {
                r: m(&[vec![1, 1]]),
                s: m(&[vec![1], vec![1]]),
            },
        )
    }

    #[test]
    fn elementary_examples() {
        let (a, b, w) = example();
        assert_eq!(verify_elementary(&a, &b, &w), Ok(true));
        let i2 = IntMatrix::identity(2);
        let id = ESWitness {
            r: i2.clone(),
            s: i2.clone(),
        };
        assert_eq!(verify_elementary(&i2, &i2, &id), Ok(true));
        let bad = ESWitness {
            r: m(&[vec![1, 0]]),
            ..w.clone()
        };
        assert_eq!(verify_elementary(&a, &b, &bad), Ok(false));
        let wrong_shape = ESWitness {
            r: m(&[vec![1, 1, 1]]),
            ..w
        };
        assert!(matches!(verify_elementary(&a, &b, &wrong_shape), Err(ShiftError::Shape(_))));
    }

    #[test]
    fn chain_examples() {
        let (a, b, w) = example();
        let one = SSEChain {
            matrices: vec![a.clone(), b.clone()],
            links: vec![w.clone()],
        };
        assert!(verify_sse_chain(&one).valid);
        assert!(verify_sse_chain(&SSEChain::trivial(a.clone())).valid);
        let back = ESWitness {
            r: w.s.clone(),
            s: w.r.clone(),
        };
        let mut two = SSEChain {
            matrices: vec![a.clone(), b.clone(), a.clone()],
            links: vec![w, back],
        };
        assert!(verify_sse_chain(&two).valid);
        two.matrices[1] = m(&[vec![2, 0], vec![0, 0]]);
        assert_eq!(
            verify_sse_chain(&two),
            ChainCheck {
                valid: false,
                failing_index: Some(1)
            }
        );
    }

    #[test]
    fn chain_text_round_trip() {
        let (a, b, w) = example();
        let chain = SSEChain {
            matrices: vec![a, b],
            links: vec![w],
        };
        assert_eq!(SSEChain::parse(&chain.to_text()).unwrap(), chain);
    }

    #[test]
    fn se_examples() {
        let (a, b, w) = example();
        let se = SEWitness {
            r: w.r.clone(),
            s: w.s.clone(),
            lag: 1,
        };
        assert_eq!(verify_se(&a, &b, &se), Ok(true));
        assert_eq!(verify_se(&a, &b, &SEWitness { lag: 2, ..se }), Ok(false));
        let c = m(&[vec![1, 3], vec![2, 1]]);
        let selfw = SEWitness {
            r: c.clone(),
            s: IntMatrix::identity(2),
            lag: 1,
        };
        assert_eq!(verify_se(&c, &c, &selfw), Ok(true));
    }

    #[test]
    fn invariants_of_a3_b3() {
        let a3 = m(&[vec![1, 3], vec![2, 1]]);
        let b3 = m(&[vec![1, 6], vec![1, 1]]);
        let r = invariants_report(&a3, &b3).unwrap();
        assert_eq!(r.a.bowen_franks.invariant_factors, vec![BigInt::from(6)]);
        assert_eq!(r.a.bowen_franks.to_string(), "Z/6");
        assert_eq!(r.a.bowen_franks, r.b.bowen_franks);
        assert_eq!(format_poly(&r.a.charpoly_core), "t^2 - 2t - 5");
        assert_eq!(r.a.charpoly_core, r.b.charpoly_core);
        assert_eq!(r.verdict, InvariantVerdict::NoObstruction);
    }

    #[test]
    fn scalar_obstruction() {
        let r = invariants_report(&m(&[vec![2]]), &m(&[vec![3]])).unwrap();
        assert!(r.a.bowen_franks.invariant_factors.is_empty());
        assert_eq!(r.b.bowen_franks.invariant_factors, vec![BigInt::from(2)]);
        assert!(r.is_obstruction());
        let same = invariants_report(&m(&[vec![2]]), &m(&[vec![2]])).unwrap();
        assert!(!same.is_obstruction());
    }

    #[test]
    fn core_polynomial_strips_t() {
        let nil = m(&[vec![1, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
        let inv = matrix_invariants(&nil).unwrap();
        assert_eq!(format_poly(&inv.charpoly_core), "t^2 - t - 1");
        let i1 = matrix_invariants(&IntMatrix::identity(1)).unwrap();
        assert_eq!(i1.bowen_franks.free_rank, 1);
        assert_eq!(i1.bowen_franks.to_string(), "Z");
    }
}
