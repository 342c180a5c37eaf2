mod common;

use common::*;
use monodyn::lpa::{
    higman_thompson_iso, kp_compare, lpa_simple, lpa_zorn, CompareBounds, CompareMode, CompareVerdict, FailingCondition,
    IsoWitness, Mismatch,
};
use monodyn::monoid::{enumerate_monoid, graph_monoid_presentation};
use monodyn::shifteq::verify_se;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_against_oracle(g: &monodyn::Graph) {
    let zorn = brute_every_cycle_has_exit(g);
    assert_eq!(lpa_zorn(g), zorn, "zorn on\n{}", g.to_text());
    let report = g.every_cycle_has_exit();
    assert_eq!(report.every_cycle_has_exit, zorn);
    if let Some(w) = &report.witness {
        let idx: Vec<usize> = w.iter().map(|n| g.index_of(n).unwrap()).collect();
        assert!(simple_cycles(g).contains(&idx), "witness is a simple cycle");
        assert!(idx.iter().all(|&v| g.outdegree(v) == 1));
    }
    let v = lpa_simple(g);
    assert_eq!(v.simple, zorn && brute_cofinal(g), "simple on\n{}", g.to_text());
    assert_eq!(v.simple, v.failing_condition == FailingCondition::None);
    if let FailingCondition::Cofinality { vertex, .. } = &v.failing_condition {
        assert!(!brute_cofinal(g));
        assert!(g.index_of(vertex).is_some());
    }
}

#[test]
fn exhaustive_small_graphs() {
    for n in 1..=3usize {
        let cells = n * n;
        for code in 0..3u64.pow(cells as u32) {
            let mut c = code;
            let mults: Vec<u64> = (0..cells)
                .map(|_| {
                    let m = c % 3;
                    c /= 3;
                    m
                })
                .collect();
            check_against_oracle(&graph_from_mults(n, &mults));
        }
    }
}

#[test]
fn random_graphs_up_to_five_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..3000 {
        check_against_oracle(&random_graph(&mut rng, 5, 2));
    }
}

fn direct_condition(n: u64, r: u64, m: u64, s: u64) -> bool {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    m == n && gcd(r, n - 1) == gcd(s, n - 1)
}

#[test]
fn gcd_theorems_agree() {
    for n in 2..=6 {
        for m in 2..=6 {
            for r in 1..=10 {
                for s in 1..=10 {
                    let a = monodyn::lpa::matrix_leavitt_iso(n, r, m, s).unwrap();
                    let b = higman_thompson_iso(n, r, m, s).unwrap();
                    assert_eq!(a, b);
                    assert_eq!(a, direct_condition(n, r, m, s));
                    assert_eq!(a, monodyn::lpa::matrix_leavitt_iso(m, s, n, r).unwrap());
                }
            }
            assert!(higman_thompson_iso(n, 3, n, 3).unwrap());
        }
    }
}

#[test]
fn compare_verdicts_carry_checkable_evidence() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let bounds = CompareBounds {
        monoid_elements: 200,
        max_candidates: 20_000,
        ..CompareBounds::default()
    };
    for _ in 0..40 {
        let e = random_graph(&mut rng, 3, 2);
        let f = random_graph(&mut rng, 3, 2);
        for mode in [CompareMode::Plain, CompareMode::Graded] {
            match kp_compare(&e, &f, mode, &bounds).unwrap() {
                CompareVerdict::IsoWitnessFound { witness } => match witness {
                    IsoWitness::Identity => assert_eq!(e, f),
                    IsoWitness::Monoid { element_map, .. } => {
                        let pe = graph_monoid_presentation(&e, false, false).unwrap();
                        let pf = graph_monoid_presentation(&f, false, false).unwrap();
                        let te = enumerate_monoid(&pe, bounds.monoid_elements, bounds.search_depth).unwrap();
                        let tf = enumerate_monoid(&pf, bounds.monoid_elements, bounds.search_depth).unwrap();
                        assert!(te.is_isomorphism(&tf, &element_map));
                        let ue = te.evaluate(&pe.order_unit());
                        assert_eq!(element_map[ue], tf.evaluate(&pf.order_unit()));
                    }
                    IsoWitness::ShiftEquivalence { witness } => {
                        assert_eq!(verify_se(&e.adjacency_matrix(), &f.adjacency_matrix(), &witness), Ok(true));
                    }
                },
                CompareVerdict::NotIso { mismatch } => match mismatch {
                    Mismatch::Size { first, second } => assert_ne!(first, second),
                    Mismatch::GroupCompletion { first, second } => assert_ne!(first, second),
                    Mismatch::ShiftInvariants { report } => assert!(report.is_obstruction()),
                    Mismatch::NoUnitPreservingIso { .. } => {}
                },
                CompareVerdict::Unknown { .. } => {}
            }
        }
    }
}
