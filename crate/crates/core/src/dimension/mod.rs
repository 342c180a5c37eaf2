//! Krieger's dimension group of a square nonnegative matrix `A`: the direct
//! limit of `Z^n -> Z^n -> ...` under `vec -> vec·A`, with its positive cone
//! and the automorphism induced by `A`.

mod talented;

pub use talented::{talented_window, TalentedWindow, WindowError};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::matrix::IntMatrix;
use crate::snf::solve_left;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimError {
    #[error("dimension group needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension group needs a nonnegative matrix")]
    Negative,
    #[error("vector has length {found}, expected {expected}")]
    Length { found: usize, expected: usize },
    #[error("cannot parse element `{0}`; expected `[v1 v2 ...]@stage`")]
    Parse(String),
}

/// The class of `vec` at `stage`; `(vec, s)` and `(vec·A, s + 1)` are the same element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DimElement {
    pub vec: Vec<BigInt>,
    pub stage: i64,
}

impl DimElement {
    pub fn new<T: Into<BigInt> + Copy>(vec: &[T], stage: i64) -> Self {
        DimElement {
            vec: vec.iter().map(|&x| x.into()).collect(),
            stage,
        }
    }

    pub fn parse(text: &str) -> Result<Self, DimError> {
        let bad = || DimError::Parse(text.to_string());
        let t = text.trim();
        let (body, stage) = match t.rsplit_once('@') {
            Some((b, s)) => (b.trim(), s.trim().parse().map_err(|_| bad())?),
            None => (t, 0),
        };
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        let vec = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        Ok(DimElement { vec, stage })
    }
}

impl fmt::Display for DimElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vec.iter().map(ToString::to_string).collect();
        write!(f, "[{}]@{}", parts.join(" "), self.stage)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Equality {
    /// Both sides agree once carried to `stage`.
    Yes { stage: i64 },
    No,
    Inconclusive { max_power: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Positivity {
    /// `vec·A^power` is entrywise nonnegative.
    Positive { power: u32 },
    /// `vec·A^power` is entrywise negative and `A` has no zero column.
    NotPositive { power: u32 },
    Inconclusive { max_power: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimGroup {
    matrix: IntMatrix,
    #[serde(skip)]
    invertible: bool,
    #[serde(skip)]
    zero_column: bool,
}

impl DimGroup {
    pub fn new(matrix: IntMatrix) -> Result<Self, DimError> {
        if !matrix.is_square() {
            return Err(DimError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !matrix.is_nonnegative() {
            return Err(DimError::Negative);
        }
        let n = matrix.rows();
        let invertible = !matrix.determinant().expect("square").is_zero();
        let zero_column = (0..n).any(|j| (0..n).all(|i| matrix.get(i, j).is_zero()));
        Ok(DimGroup {
            matrix,
            invertible,
            zero_column,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn check(&self, x: &DimElement) -> Result<(), DimError> {
        if x.vec.len() != self.rank() {
            return Err(DimError::Length {
                found: x.vec.len(),
                expected: self.rank(),
            });
        }
        Ok(())
    }

    fn act(&self, v: &[BigInt], times: u64) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for _ in 0..times {
            v = self.matrix.left_mul_vec(&v);
        }
        v
    }

    /// The vector representing `x` at a later stage.
    pub fn at_stage(&self, x: &DimElement, stage: i64) -> Vec<BigInt> {
        assert!(stage >= x.stage);
        self.act(&x.vec, (stage - x.stage) as u64)
    }

    pub fn add(&self, x: &DimElement, y: &DimElement) -> Result<DimElement, DimError> {
        self.check(x)?;
        self.check(y)?;
        let m = x.stage.max(y.stage);
        let vec = self
            .at_stage(x, m)
            .into_iter()
            .zip(self.at_stage(y, m))
            .map(|(a, b)| a + b)
            .collect();
        Ok(DimElement { vec, stage: m })
    }

    pub fn neg(&self, x: &DimElement) -> DimElement {
        DimElement {
            vec: x.vec.iter().map(|a| -a).collect(),
            stage: x.stage,
        }
    }

    /// Equality in the direct limit, searching common stages up to
    /// `max(stage) + max_power`.
    ///
    /// Without an invertible `A`, a difference killed by some power of `A` is
    /// killed by `A^n`, so reaching `n` powers settles the question.
    pub fn equal(&self, x: &DimElement, y: &DimElement, max_power: u32) -> Result<Equality, DimError> {
        self.check(x)?;
        self.check(y)?;
        let m0 = x.stage.max(y.stage);
        let mut diff: Vec<BigInt> = self
            .at_stage(x, m0)
            .into_iter()
            .zip(self.at_stage(y, m0))
            .map(|(a, b)| a - b)
            .collect();
        if diff.iter().all(Zero::is_zero) {
            return Ok(Equality::Yes { stage: m0 });
        }
        if self.invertible {
            return Ok(Equality::No);
        }
        let n = self.rank() as u32;
        for j in 1..=max_power.min(n) {
            diff = self.matrix.left_mul_vec(&diff);
            if diff.iter().all(Zero::is_zero) {
                return Ok(Equality::Yes {
                    stage: m0 + i64::from(j),
                });
            }
        }
        if max_power >= n {
            Ok(Equality::No)
        } else {
            Ok(Equality::Inconclusive { max_power })
        }
    }

    /// Membership in the positive cone, tried at powers `0..=max_power`.
    pub fn positive(&self, x: &DimElement, max_power: u32) -> Result<Positivity, DimError> {
        self.check(x)?;
        let mut v = x.vec.clone();
        for m in 0..=max_power {
            if v.iter().all(|a| !a.is_negative()) {
                return Ok(Positivity::Positive { power: m });
            }
            if !self.zero_column && v.iter().all(Signed::is_negative) {
                return Ok(Positivity::NotPositive { power: m });
            }
            if m < max_power {
                v = self.matrix.left_mul_vec(&v);
            }
        }
        Ok(Positivity::Inconclusive { max_power })
    }

    /// The automorphism induced by `A` (forward) or its inverse (backward).
    pub fn shift(&self, x: &DimElement, direction: Direction) -> DimElement {
        match direction {
            Direction::Forward => DimElement {
                vec: self.matrix.left_mul_vec(&x.vec),
                stage: x.stage,
            },
            Direction::Backward => DimElement {
                vec: x.vec.clone(),
                stage: x.stage + 1,
            },
        }
    }

    /// Moves `x` to the least stage not below 0 at which it has an integer representative.
    pub fn normalize(&self, x: &DimElement) -> DimElement {
        let mut cur = x.clone();
        while cur.stage > 0 {
            match solve_left(&self.matrix, &cur.vec) {
                Some(w) => {
                    cur = DimElement {
                        vec: w,
                        stage: cur.stage - 1,
                    }
                }
                None => break,
            }
        }
        cur
    }
}

/// Exact test of `φm + n >= 0` for the golden ratio `φ`.
pub fn fib_cone_member(m: i64, n: i64) -> bool {
    let m = i128::from(m);
    let t = m + 2 * i128::from(n);
    (m >= 0 && t >= 0) || (m >= 0 && 5 * m * m >= t * t) || (m < 0 && t >= 0 && t * t >= 5 * m * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> DimGroup {
        DimGroup::new(IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]])).unwrap()
    }

    #[test]
    fn equality_examples() {
        let g = fib();
        let e = |v: [i64; 2], s| DimElement::new(&v, s);
        assert_eq!(g.equal(&e([1, 0], 0), &e([1, 1], 1), 64), Ok(Equality::Yes { stage: 1 }));
        assert_eq!(g.equal(&e([1, 0], 0), &e([0, 1], 0), 64), Ok(Equality::No));
        assert!(matches!(g.equal(&e([0, 0], 3), &e([0, 0], 7), 64), Ok(Equality::Yes { .. })));
        assert_eq!(
            g.equal(&e([1, 0], 0), &DimElement::new(&[1, 0, 0], 0), 64),
            Err(DimError::Length { found: 3, expected: 2 })
        );
    }

    #[test]
    fn singular_matrix_equality() {
        let g = DimGroup::new(IntMatrix::from_rows(&[vec![1, 1], vec![0, 0]])).unwrap();
        // (0,1)·A = 0, so (0,1) is the zero element
        let x = DimElement::new(&[1, 0], 0);
        let zero = DimElement::new(&[0, 0], 0);
        assert_eq!(g.equal(&x, &zero, 64), Ok(Equality::No));
        let z = DimElement::new(&[0, 1], 0);
        assert_eq!(g.equal(&z, &zero, 64), Ok(Equality::Yes { stage: 1 }));
        let nil = DimGroup::new(IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]])).unwrap();
        let w = DimElement::new(&[1, 0, 0], 0);
        assert_eq!(
            nil.equal(&w, &DimElement::new(&[0, 0, 0], 0), 1),
            Ok(Equality::Inconclusive { max_power: 1 })
        );
        assert!(matches!(nil.equal(&w, &DimElement::new(&[0, 0, 0], 0), 3), Ok(Equality::Yes { .. })));
    }

    #[test]
    fn positivity_examples() {
        let g = fib();
        assert_eq!(
            g.positive(&DimElement::new(&[-1, 2], 0), 64),
            Ok(Positivity::Positive { power: 2 })
        );
        assert!(matches!(
            g.positive(&DimElement::new(&[-2, 3], 0), 64),
            Ok(Positivity::NotPositive { .. })
        ));
        assert_eq!(
            g.positive(&DimElement::new(&[0, 0], 5), 64),
            Ok(Positivity::Positive { power: 0 })
        );
    }

    #[test]
    fn zero_column_blocks_negative_certificate() {
        let g = DimGroup::new(IntMatrix::from_rows(&[vec![1, 0], vec![1, 0]])).unwrap();
        assert_eq!(
            g.positive(&DimElement::new(&[-1, -1], 0), 8),
            Ok(Positivity::Inconclusive { max_power: 8 })
        );
    }

    #[test]
    fn shift_examples() {
        let g = fib();
        let x = DimElement::new(&[1, 0], 0);
        assert_eq!(g.shift(&x, Direction::Forward), DimElement::new(&[1, 1], 0));
        let round = g.shift(&g.shift(&x, Direction::Backward), Direction::Forward);
        assert!(matches!(g.equal(&round, &x, 64), Ok(Equality::Yes { .. })));
        let zero = DimElement::new(&[0, 0], 2);
        assert_eq!(g.shift(&zero, Direction::Forward), zero);
    }

    #[test]
    fn normalize_lowers_stage() {
        let g = fib();
        let x = DimElement::new(&[2, 1], 3);
        let n = g.normalize(&x);
        assert_eq!(n.stage, 0);
        assert!(matches!(g.equal(&x, &n, 64), Ok(Equality::Yes { .. })));
        let d = DimGroup::new(IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert_eq!(d.normalize(&DimElement::new(&[6], 4)), DimElement::new(&[3], 3));
    }

    #[test]
    fn fibonacci_cone() {
        assert!(fib_cone_member(1, 0));
        assert!(!fib_cone_member(-2, 3));
        assert!(fib_cone_member(0, 0));
        assert!(fib_cone_member(-1, 2));
        assert!(!fib_cone_member(1, -2));
    }

    #[test]
    fn element_text() {
        let x = DimElement::parse("[3 -1]@2").unwrap();
        assert_eq!(x, DimElement::new(&[3, -1], 2));
        assert_eq!(x.to_string(), "[3 -1]@2");
        assert_eq!(DimElement::parse("[0 0]").unwrap().stage, 0);
        assert!(DimElement::parse("3 1").is_err());
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            DimGroup::new(IntMatrix::zeros(1, 2)),
            Err(DimError::NotSquare { .. })
        ));
    }
}
