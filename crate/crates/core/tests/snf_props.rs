use monodyn::matrix::IntMatrix;
use monodyn::snf::{integer_kernel, smith_normal_form, solve_left};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Cofactor expansion, independent of the library's elimination.
fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &rows[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Invariant factors from determinantal divisors: `s_k = d_k / d_{k-1}`, where
/// `d_k` is the gcd of all k×k minors.
fn invariant_factors_oracle(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = m.shape();
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
        } else {
            out.push(&g / &prev);
            prev = g;
        }
    }
    out
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols)
        .prop_map(move |v| IntMatrix::new(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap())
}

fn check_smith(m: &IntMatrix) {
    let s = smith_normal_form(m);
    assert_eq!(&(&s.u * m) * &s.v, s.d);
    assert!(s.u.determinant().unwrap().abs().is_one());
    assert!(s.v.determinant().unwrap().abs().is_one());
    let (r, c) = m.shape();
    for i in 0..r {
        for j in 0..c {
            if i != j {
                assert!(s.d.get(i, j).is_zero());
            }
        }
    }
    for w in s.diagonal.windows(2) {
        assert!(!w[0].is_negative());
        if w[0].is_zero() {
            assert!(w[1].is_zero());
        } else {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }
    assert_eq!(s.diagonal, invariant_factors_oracle(m));
    assert_eq!(s.rank, s.diagonal.iter().filter(|d| !d.is_zero()).count());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_of_square_matrices(m in matrix(4, 4)) {
        check_smith(&m);
    }

    #[test]
    fn smith_form_of_rectangular_matrices(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        check_smith(&m);
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix(3, 4)) {
        let ker = integer_kernel(&m);
        let s = smith_normal_form(&m);
        prop_assert_eq!(ker.len(), 4 - s.rank);
        for v in ker {
            let mv = m.transpose().left_mul_vec(&v);
            prop_assert!(mv.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn left_solutions_solve(m in matrix(3, 3), w in prop::collection::vec(-5i64..=5, 3)) {
        let w: Vec<BigInt> = w.into_iter().map(BigInt::from).collect();
        let b = m.left_mul_vec(&w);
        let sol = solve_left(&m, &b).expect("b is in the row lattice");
        prop_assert_eq!(m.left_mul_vec(&sol), b);
    }
}

#[test]
fn low_rank_and_zero_matrices() {
    check_smith(&IntMatrix::zeros(3, 3));
    check_smith(&IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 2, 3], vec![3, 6, 9]]));
    check_smith(&IntMatrix::from_rows(&[vec![0, -3], vec![-2, 0]]));
}
