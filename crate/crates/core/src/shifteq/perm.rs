//! Simultaneous row/column permutations.

use crate::matrix::IntMatrix;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `P M Pᵀ` for the permutation matrix sending `i` to `perm[i]`: entry
/// `(i, j)` of the result is `M[perm[i]][perm[j]]`.
pub fn conjugate(m: &IntMatrix, perm: &[usize]) -> IntMatrix {
    let n = m.rows();
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(perm[i], perm[j]).clone());
        }
    }
    out
}

/// The permutation conjugate of `m` with the lexicographically least entry list.
pub fn canonical_form(m: &IntMatrix) -> IntMatrix {
    assert!(m.is_square());
    permutations(m.rows())
        .iter()
        .map(|p| conjugate(m, p))
        .min_by(|x, y| x.entries().cmp(y.entries()))
        .expect("at least one permutation")
}

/// Some `perm` with `conjugate(target, perm) == m`.
pub fn find_conjugating(m: &IntMatrix, target: &IntMatrix) -> Option<Vec<usize>> {
    if !m.is_square() || m.shape() != target.shape() {
        return None;
    }
    permutations(m.rows()).into_iter().find(|p| &conjugate(target, p) == m)
}

/// The permutation matrix `P` with `P M Pᵀ == conjugate(M, perm)`.
pub fn permutation_matrix(perm: &[usize]) -> IntMatrix {
    let n = perm.len();
    let mut p = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, 1.into());
    }
    p
}
