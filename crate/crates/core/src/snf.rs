//! Smith normal form over the integers, with the unimodular transforms.
//!
//! `U * M * V = D` where `D` is diagonal with nonnegative entries forming a
//! divisibility chain `d1 | d2 | ... | dr`, followed by zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// The diagonal of `d` (length `min(rows, cols)`).
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal entries different from 1 and 0: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// Free rank of the cokernel `Z^rows / M Z^cols`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.d.rows() - self.rank
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        self.u.swap(i, k);
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(j, k);
        }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let (src, dst) = split_pair(m, t, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d -= q * s;
            }
        }
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[t].clone();
                row[j] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[t].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn split_pair(m: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_matrix(rows: Vec<Vec<BigInt>>) -> IntMatrix {
    let r = rows.len();
    let c = rows[0].len();
    IntMatrix::new(r, c, rows.into_iter().flatten().collect()).expect("shape")
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = m.shape();
    let mut w = Work {
        a: m.to_rows(),
        u: identity_rows(r),
        v: identity_rows(c),
    };
    let mut rank = 0;
    'outer: for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let pivot = w.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..r {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&pivot);
                w.row_sub(i, t, &q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..c {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&pivot);
                w.col_sub(j, t, &q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                // row_t += row_i
                w.row_sub(t, i, &BigInt::from(-1));
                continue;
            }
            break;
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        rank += 1;
    }
    let diagonal = (0..r.min(c)).map(|i| w.a[i][i].clone()).collect();
    SmithForm {
        u: to_matrix(w.u),
        v: to_matrix(w.v),
        d: to_matrix(w.a),
        diagonal,
        rank,
    }
}

/// A Z-basis (as column vectors) of the integer kernel `{x : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank..m.cols())
        .map(|j| (0..m.cols()).map(|i| snf.v.get(i, j).clone()).collect())
        .collect()
}

/// Some integer row vector `w` with `w * M = b`, if one exists.
pub fn solve_left(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.cols());
    let snf = smith_normal_form(m);
    // w M = b  <=>  (w U^-1) D = b V
    let bv = snf.v.left_mul_vec(b);
    let mut z = vec![BigInt::zero(); m.rows()];
    for (j, x) in bv.iter().enumerate() {
        if j < snf.rank {
            let (q, rem) = x.div_rem(&snf.diagonal[j]);
            if !rem.is_zero() {
                return None;
            }
            z[j] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(snf.u.left_mul_vec(&z))
}
