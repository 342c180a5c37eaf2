//! Bounded searches for shift-equivalence witnesses.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::perm::{canonical_form, find_conjugating, permutation_matrix};
use super::{invariants_report, require_square, ESWitness, InvariantReport, SEWitness, SSEChain, ShiftError};
use crate::matrix::IntMatrix;
use crate::snf::integer_kernel;

/// Coefficient vectors tried per kernel before giving up.
const MAX_COMBINATIONS: u64 = 200_000;
/// `(R, S)` pairs tested before giving up.
const MAX_PAIRS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SseBounds {
    pub max_depth: usize,
    pub max_inner_dim: usize,
    /// Distinct matrices (up to permutation) kept before the search stops growing.
    pub max_nodes: usize,
}

impl Default for SseBounds {
    fn default() -> Self {
        SseBounds {
            max_depth: 6,
            max_inner_dim: 3,
            max_nodes: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SseOutcome {
    Found {
        chain: SSEChain,
    },
    NotFound {
        bounds: SseBounds,
        nodes: usize,
        /// Every matrix reachable within the inner-dimension bound was visited.
        exhausted: bool,
        /// The node cap cut the search short.
        truncated: bool,
    },
}

struct Node {
    matrix: IntMatrix,
    parent: Option<(usize, ESWitness)>,
}

/// Breadth-first search over elementary moves `M = RS -> SR`.
///
/// Factorizations have inner dimension at most `max_inner_dim`; `R` has no
/// zero column, `S` no zero row, and the columns of `R` are in non-increasing
/// order (other column orders only permute `SR`). Matrices equal up to a
/// simultaneous permutation are visited once.
pub fn sse_search(a: &IntMatrix, b: &IntMatrix, bounds: &SseBounds) -> Result<SseOutcome, ShiftError> {
    require_square(a)?;
    require_square(b)?;
    if !(a.is_nonnegative() && b.is_nonnegative()) {
        return Err(ShiftError::Shape("matrices must be nonnegative".into()));
    }
    if a == b {
        return Ok(SseOutcome::Found {
            chain: SSEChain::trivial(a.clone()),
        });
    }
    let target = canonical_form(b);
    let mut nodes = vec![Node {
        matrix: a.clone(),
        parent: None,
    }];
    let mut seen: HashSet<IntMatrix> = HashSet::from([canonical_form(a)]);
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for _ in 0..bounds.max_depth {
        let mut next = Vec::new();
        for &k in &frontier {
            let m = nodes[k].matrix.clone();
            for (r, s) in factorizations(&m, bounds.max_inner_dim) {
                let succ = &s * &r;
                if succ.shape() == b.shape() && canonical_form(&succ) == target {
                    let perm = find_conjugating(&succ, b).expect("canonical forms agree");
                    let p = permutation_matrix(&perm);
                    let last = ESWitness {
                        r: &r * &p,
                        s: &p.transpose() * &s,
                    };
                    return Ok(SseOutcome::Found {
                        chain: build_chain(&nodes, k, last, b.clone()),
                    });
                }
                let canon = canonical_form(&succ);
                if seen.contains(&canon) {
                    continue;
                }
                if nodes.len() >= bounds.max_nodes {
                    truncated = true;
                    continue;
                }
                seen.insert(canon);
                nodes.push(Node {
                    matrix: succ,
                    parent: Some((k, ESWitness { r, s })),
                });
                next.push(nodes.len() - 1);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(SseOutcome::NotFound {
        bounds: *bounds,
        nodes: nodes.len(),
        exhausted: frontier.is_empty() && !truncated,
        truncated,
    })
}

fn build_chain(nodes: &[Node], mut k: usize, last: ESWitness, end: IntMatrix) -> SSEChain {
    let mut matrices = vec![end];
    let mut links = vec![last];
    loop {
        matrices.push(nodes[k].matrix.clone());
        match &nodes[k].parent {
            Some((p, w)) => {
                links.push(w.clone());
                k = *p;
            }
            None => break,
        }
    }
    matrices.reverse();
    links.reverse();
    SSEChain { matrices, links }
}

/// Nonnegative factorizations `m = RS`, ordered by inner dimension, then `R`, then `S`.
pub(crate) fn factorizations(m: &IntMatrix, max_inner_dim: usize) -> Vec<(IntMatrix, IntMatrix)> {
    let n = m.rows();
    let entries: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.get(i, j).to_u64().expect("nonnegative entry fits u64"))
                .collect()
        })
        .collect();
    // an entry of R times a nonzero entry in its row of S is at most the matching entry of m
    let row_max: Vec<u64> = entries.iter().map(|r| r.iter().copied().max().unwrap_or(0)).collect();
    let mut out = Vec::new();
    for d in 1..=max_inner_dim {
        let mut r = vec![0u64; n * d];
        loop {
            if r_is_admissible(&r, n, d) {
                for s in solve_s(&entries, &r, n, d) {
                    out.push((to_matrix(&r, n, d), to_matrix(&s, d, n)));
                }
            }
            // odometer over R in lexicographic order
            let mut pos = n * d;
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                if r[pos] < row_max[pos / d] {
                    r[pos] += 1;
                    done = false;
                    break;
                }
                r[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    out
}

fn r_is_admissible(r: &[u64], n: usize, d: usize) -> bool {
    let col = |k: usize| (0..n).map(move |i| r[i * d + k]);
    (0..d).all(|k| col(k).any(|x| x > 0)) && (1..d).all(|k| col(k - 1).cmp(col(k)).is_ge())
}

/// All nonnegative `S` (d×n, no zero row) with `R S = m`, in lexicographic order.
#[allow(clippy::needless_range_loop)]
fn solve_s(m: &[Vec<u64>], r: &[u64], n: usize, d: usize) -> Vec<Vec<u64>> {
    let mut columns: Vec<Vec<Vec<u64>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut sols = Vec::new();
        let mut remaining: Vec<u64> = (0..n).map(|i| m[i][j]).collect();
        let mut cur = vec![0u64; d];
        column_solutions(r, n, d, 0, &mut remaining, &mut cur, &mut sols);
        if sols.is_empty() {
            return Vec::new();
        }
        columns.push(sols);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut s = vec![0u64; d * n];
        for (j, &c) in idx.iter().enumerate() {
            for k in 0..d {
                s[k * n + j] = columns[j][c][k];
            }
        }
        if (0..d).all(|k| (0..n).any(|j| s[k * n + j] > 0)) {
            out.push(s);
        }
        let mut pos = n;
        let mut done = true;
        while pos > 0 {
            pos -= 1;
            if idx[pos] + 1 < columns[pos].len() {
                idx[pos] += 1;
                done = false;
                break;
            }
            idx[pos] = 0;
        }
        if done {
            break;
        }
    }
    out.sort();
    out
}

fn column_solutions(
    r: &[u64],
    n: usize,
    d: usize,
    k: usize,
    remaining: &mut Vec<u64>,
    cur: &mut Vec<u64>,
    sols: &mut Vec<Vec<u64>>,
) {
    if k == d {
        if remaining.iter().all(|&x| x == 0) {
            sols.push(cur.clone());
        }
        return;
    }
    // largest multiple of column k of R that still fits under `remaining`
    let cap = (0..n)
        .filter(|&i| r[i * d + k] > 0)
        .map(|i| remaining[i] / r[i * d + k])
        .min()
        .unwrap_or(0);
    for x in 0..=cap {
        for i in 0..n {
            remaining[i] -= x * r[i * d + k];
        }
        cur[k] = x;
        column_solutions(r, n, d, k + 1, remaining, cur, sols);
        for i in 0..n {
            remaining[i] += x * r[i * d + k];
        }
    }
    cur[k] = 0;
}

fn to_matrix(v: &[u64], rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::new(rows, cols, v.iter().map(|&x| BigInt::from(x)).collect()).expect("shape")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeOutcome {
    Found {
        witness: SEWitness,
    },
    NotFound {
        /// Present when an invariant rules shift equivalence out.
        obstruction: Option<InvariantReport>,
        max_lag: u32,
        coeff_bound: u32,
        /// A combination or pair cap cut the search short.
        truncated: bool,
    },
}

/// Searches integer combinations of kernel bases of `R -> AR - RB` and
/// `S -> SA - BS` with coefficients in `[-coeff_bound, coeff_bound]` for a
/// nonnegative pair satisfying `A^l = RS`, `B^l = SR` with `l <= max_lag`.
pub fn se_search(a: &IntMatrix, b: &IntMatrix, max_lag: u32, coeff_bound: u32) -> Result<SeOutcome, ShiftError> {
    let n = require_square(a)?;
    let m = require_square(b)?;
    if a == b {
        return Ok(SeOutcome::Found {
            witness: SEWitness {
                r: a.clone(),
                s: IntMatrix::identity(n),
                lag: 1,
            },
        });
    }
    let not_found = |obstruction, truncated| SeOutcome::NotFound {
        obstruction,
        max_lag,
        coeff_bound,
        truncated,
    };
    let report = invariants_report(a, b)?;
    if report.is_obstruction() {
        return Ok(not_found(Some(report), false));
    }
    // (AR - RB)_{ij} over unknowns R_{ij} at index i*m + j
    let mut lr = IntMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                let x = lr.get(i * m + j, k * m + j) + a.get(i, k);
                lr.set(i * m + j, k * m + j, x);
            }
            for k in 0..m {
                let x = lr.get(i * m + j, i * m + k) - b.get(k, j);
                lr.set(i * m + j, i * m + k, x);
            }
        }
    }
    // (SA - BS)_{ij} over unknowns S_{ij} at index i*n + j
    let mut ls = IntMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            for k in 0..n {
                let x = ls.get(i * n + j, i * n + k) + a.get(k, j);
                ls.set(i * n + j, i * n + k, x);
            }
            for k in 0..m {
                let x = ls.get(i * n + j, k * n + j) - b.get(i, k);
                ls.set(i * n + j, k * n + j, x);
            }
        }
    }
    let (rs, trunc_r) = nonnegative_combinations(&integer_kernel(&lr), coeff_bound, n, m);
    let (ss, trunc_s) = nonnegative_combinations(&integer_kernel(&ls), coeff_bound, m, n);
    let mut truncated = trunc_r || trunc_s;
    let a_pows: Vec<IntMatrix> = (1..=max_lag).map(|l| a.pow(l)).collect::<Result<_, _>>()?;
    let b_pows: Vec<IntMatrix> = (1..=max_lag).map(|l| b.pow(l)).collect::<Result<_, _>>()?;
    let mut pairs = 0u64;
    'outer: for r in &rs {
        for s in &ss {
            pairs += 1;
            if pairs > MAX_PAIRS {
                truncated = true;
                break 'outer;
            }
            let rsm = r * s;
            let Some(l) = a_pows.iter().position(|p| p == &rsm) else {
                continue;
            };
            if s * r == b_pows[l] {
                return Ok(SeOutcome::Found {
                    witness: SEWitness {
                        r: r.clone(),
                        s: s.clone(),
                        lag: l as u32 + 1,
                    },
                });
            }
        }
    }
    Ok(not_found(None, truncated))
}

/// Distinct nonzero nonnegative matrices among bounded combinations of `basis`.
fn nonnegative_combinations(basis: &[Vec<BigInt>], bound: u32, rows: usize, cols: usize) -> (Vec<IntMatrix>, bool) {
    let k = basis.len();
    let mut out = Vec::new();
    if k == 0 {
        return (out, false);
    }
    let bound = i64::from(bound);
    let mut seen = HashSet::new();
    let mut coeffs = vec![-bound; k];
    let mut tried = 0u64;
    loop {
        tried += 1;
        if tried > MAX_COMBINATIONS {
            return (out, true);
        }
        let mut v = vec![BigInt::zero(); rows * cols];
        for (c, b) in coeffs.iter().zip(basis) {
            if *c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += y * c;
                }
            }
        }
        if !v.iter().any(Signed::is_negative) && v.iter().any(|x| !x.is_zero()) && seen.insert(v.clone()) {
            out.push(IntMatrix::new(rows, cols, v).expect("shape"));
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return (out, false);
            }
            pos -= 1;
            if coeffs[pos] < bound {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = -bound;
        }
    }
}
