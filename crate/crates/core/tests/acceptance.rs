//! End-to-end acceptance criteria, one line per criterion.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use monodyn::dimension::{fib_cone_member, DimElement, DimGroup, Positivity};
use monodyn::graph::{examples, Graph};
use monodyn::lpa::{higman_thompson_iso, lpa_simple, matrix_leavitt_iso, FailingCondition, Unreached};
use monodyn::matrix::{format_poly, IntMatrix};
use monodyn::monoid::{enumerate_monoid, graph_monoid_presentation, MonoidTable};
use monodyn::sandpile::{
    format_trace, make_grid, render_cells, sandpile_monoid, stabilize, stabilize_grid, stabilize_random_order,
    stabilize_traced, ChipConfig, GridMode, GridSpec, Palette, DEFAULT_FIRING_BUDGET,
};
use monodyn::shifteq::{invariants_report, sse_search, verify_elementary, verify_sse_chain, ESWitness, InvariantVerdict, SseBounds, SseOutcome};
use monodyn::snf::smith_normal_form;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type CellMap = fn(usize, usize, usize) -> (usize, usize);
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const GRAPH_E: &str = "\
v u
v v
v z
v s
e u s
e u v
e u z
e v s
e v v
e v u
e z s
e z z
e z u
";

fn worked_trace() -> Outcome {
    let g = Graph::parse(GRAPH_E).map_err(|e| e.to_string())?;
    let c = ChipConfig::from_pairs(&g, &[("v", 8)]).map_err(|e| e.to_string())?;
    let (st, trace) = stabilize_traced(&g, &c, DEFAULT_FIRING_BUDGET).map_err(|e| e.to_string())?;
    let text = format_trace(&g, &trace);
    ensure(
        text == "8v ⟿ 6v+u ⟿ 4v+2u ⟿ 2v+3u ⟿ 3v+z ⟿ v+u+z",
        format!("trace was {text}"),
    )?;
    let finals: Vec<u64> = ["u", "v", "z"].iter().map(|n| st.config.get(g.index_of(n).unwrap())).collect();
    ensure(finals == [1, 1, 1], format!("final {finals:?}"))?;
    ensure(st.config.absorbed() == 5, format!("absorbed {}", st.config.absorbed()))?;
    Ok(format!("{text}; absorbed 5"))
}

fn grid_figure() -> Outcome {
    let spec = GridSpec::new(3, 3, GridMode::Closed);
    let g = make_grid(&spec);
    let mut c = ChipConfig::zero(&g);
    spec.place(&g, &mut c, 1, 1, 4).map_err(|e| e.to_string())?;
    spec.place(&g, &mut c, 0, 1, 2).map_err(|e| e.to_string())?;
    let st = stabilize(&g, &c, DEFAULT_FIRING_BUDGET).map_err(|e| e.to_string())?;
    // NW, N, NE / W, C, E / SW, S, SE
    let expected = [1, 0, 1, 1, 1, 1, 0, 1, 0];
    ensure(st.config.counts() == expected, format!("counts {:?}", st.config.counts()))?;
    Ok("center, W, E, S, NW, NE hold one chip".into())
}

fn fractal_symmetry() -> Outcome {
    let n = 201;
    let spec = GridSpec::new(n, n, GridMode::Open);
    let mut cells = vec![0u64; n * n];
    cells[spec.cell(n / 2, n / 2)] = 1 << 14;
    let st = stabilize_grid(&spec, &cells, DEFAULT_FIRING_BUDGET).map_err(|e| e.to_string())?;
    ensure(st.cells.iter().all(|&x| x <= 3), "unstable cell remains")?;
    ensure(
        st.cells.iter().sum::<u64>() + st.absorbed == 1 << 14,
        "chip count not conserved",
    )?;
    let img = render_cells(&spec, &st.cells, &Palette::default());
    let header = format!("P6\n{n} {n}\n255\n");
    ensure(img.starts_with(header.as_bytes()), "bad PPM header")?;
    let px = &img[header.len()..];
    let pixel = |r: usize, c: usize| &px[3 * (r * n + c)..3 * (r * n + c) + 3];
    let m = n - 1;
    let maps: [CellMap; 8] = [
        |_, r, c| (r, c),
        |m, r, c| (c, m - r),
        |m, r, c| (m - r, m - c),
        |m, r, c| (m - c, r),
        |m, r, c| (r, m - c),
        |m, r, c| (m - r, c),
        |_, r, c| (c, r),
        |m, r, c| (m - c, m - r),
    ];
    for (k, f) in maps.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let (r2, c2) = f(m, r, c);
                if pixel(r, c) != pixel(r2, c2) {
                    return Err(format!("symmetry {k} fails at ({r},{c})"));
                }
            }
        }
    }
    Ok(format!("{} firings, absorbed {}", st.odometer.iter().sum::<u64>(), st.absorbed))
}

fn cyclic_structure(t: &MonoidTable, x: usize) -> Result<(), String> {
    let two = t.add(x, x);
    let three = t.add(two, x);
    let four = t.add(three, x);
    let distinct: HashSet<usize> = [t.identity, x, two, three].into_iter().collect();
    ensure(distinct.len() == 4, "0, x, 2x, 3x are not distinct")?;
    ensure(four == three, "3x + x != 3x")?;
    let multiples = [t.identity, x, two, three];
    for i in 0..4 {
        for j in 0..4 {
            ensure(
                t.add(multiples[i], multiples[j]) == multiples[(i + j).min(3)],
                format!("{i}x + {j}x is not {}x", (i + j).min(3)),
            )?;
        }
    }
    Ok(())
}

fn sandpile_monoid_f() -> Outcome {
    let g = examples::golden_with_sink();
    let sp = sandpile_monoid(&g, 100).map_err(|e| e.to_string())?;
    ensure(sp.len() == 4, format!("{} stable configurations", sp.len()))?;
    ensure(sp.check_laws(), "table laws fail")?;
    let v = sp.generator_elements[g.index_of("v").unwrap()];
    cyclic_structure(&sp, v)?;
    let p = graph_monoid_presentation(&g, true, true).map_err(|e| e.to_string())?;
    let t = enumerate_monoid(&p, 100, 6).map_err(|e| e.to_string())?;
    ensure(t.len() == 4, format!("presentation gives {} elements", t.len()))?;
    cyclic_structure(&t, t.generator_elements[1])?;
    Ok("{0, x, 2x, 3x} with 3x + x = 3x".into())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut seen = HashSet::new();
    let mut corpus = Vec::new();
    while corpus.len() < 60 {
        let g = common::random_sandpile_graph(&mut rng, 5, 3);
        if seen.insert(g.to_text()) {
            corpus.push(g);
        }
    }
    let mut elements = 0;
    for g in &corpus {
        ensure(g.vertex_count() <= 5, "graph too large")?;
        let sp = sandpile_monoid(g, 10_000).map_err(|e| e.to_string())?;
        let p = graph_monoid_presentation(g, true, true).map_err(|e| e.to_string())?;
        let t = enumerate_monoid(&p, 10_000, 6).map_err(|e| format!("{e} on\n{}", g.to_text()))?;
        let map: Vec<usize> = t.elements.iter().map(|rep| sp.evaluate(rep)).collect();
        ensure(t.is_isomorphism(&sp, &map), format!("tables differ on\n{}", g.to_text()))?;
        elements += t.len();
    }
    Ok(format!("{} graphs, {elements} elements in total", corpus.len()))
}

fn abelian_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..200 {
        let g = common::random_sandpile_graph(&mut rng, 6, 4);
        let counts = (0..g.vertex_count())
            .map(|v| if g.is_sink(v) { 0 } else { rng.gen_range(0..16) })
            .collect();
        let c = ChipConfig::from_counts(&g, counts).map_err(|e| e.to_string())?;
        let a = stabilize_random_order(&g, &c, &mut rng, DEFAULT_FIRING_BUDGET).map_err(|e| e.to_string())?;
        let b = stabilize_random_order(&g, &c, &mut rng, DEFAULT_FIRING_BUDGET).map_err(|e| e.to_string())?;
        ensure(a == b, format!("trial {trial} differs"))?;
    }
    Ok("200 trials agree".into())
}

fn elementary_example() -> Outcome {
    let a = IntMatrix::from_rows(&[vec![2]]);
    let b = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
    let w = ESWitness {
        r: IntMatrix::from_rows(&[vec![1, 1]]),
        s: IntMatrix::from_rows(&[vec![1], vec![1]]),
    };
    ensure(verify_elementary(&a, &b, &w) == Ok(true), "witness rejected")?;
    let bounds = SseBounds {
        max_depth: 1,
        max_inner_dim: 2,
        max_nodes: 1_000,
    };
    match sse_search(&a, &b, &bounds).map_err(|e| e.to_string())? {
        SseOutcome::Found { chain } => {
            ensure(chain.len() == 1, "chain is not one link")?;
            ensure(verify_sse_chain(&chain).valid, "chain does not verify")?;
            Ok(format!("R = {}, S = {}", chain.links[0].r, chain.links[0].s))
        }
        SseOutcome::NotFound { .. } => Err("search found nothing".into()),
    }
}

fn invariant_engine() -> Outcome {
    let a3 = IntMatrix::from_rows(&[vec![1, 3], vec![2, 1]]);
    let b3 = IntMatrix::from_rows(&[vec![1, 6], vec![1, 1]]);
    let r = invariants_report(&a3, &b3).map_err(|e| e.to_string())?;
    for inv in [&r.a, &r.b] {
        ensure(inv.bowen_franks.to_string() == "Z/6", format!("Bowen-Franks {}", inv.bowen_franks))?;
        let poly = format_poly(&inv.charpoly_core);
        ensure(poly == "t^2 - 2t - 5", format!("polynomial {poly}"))?;
    }
    ensure(r.verdict == InvariantVerdict::NoObstruction, "obstruction reported")?;
    Ok("Z/6 and t^2 - 2t - 5 on both sides".into())
}

fn fibonacci_cone() -> Outcome {
    let g = DimGroup::new(IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]])).map_err(|e| e.to_string())?;
    let mut count = 0;
    for m in -50i64..=50 {
        for n in -50i64..=50 {
            let oracle = match g.positive(&DimElement::new(&[m, n], 0), 64).map_err(|e| e.to_string())? {
                Positivity::Positive { .. } => true,
                Positivity::NotPositive { .. } => false,
                Positivity::Inconclusive { .. } => return Err(format!("inconclusive at ({m}, {n})")),
            };
            ensure(oracle == fib_cone_member(m, n), format!("disagree at ({m}, {n})"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs agree"))
}

fn example_classification() -> Outcome {
    let left = lpa_simple(&examples::tail_into_bare_cycle());
    let middle = lpa_simple(&examples::cycle_to_sink());
    let right = lpa_simple(&examples::golden_graph());
    let got = (left.simple, middle.simple, right.simple);
    ensure(got == (false, false, true), format!("verdicts {got:?}"))?;
    ensure(
        matches!(left.failing_condition, FailingCondition::ExitlessCycle { .. }),
        "left: expected an exit-less cycle",
    )?;
    match &middle.failing_condition {
        FailingCondition::Cofinality {
            vertex,
            unreached: Unreached::Cycle { .. },
        } if vertex == "z" => {}
        other => return Err(format!("middle: {other:?}")),
    }
    Ok("(false, false, true)".into())
}

fn gcd_theorems() -> Outcome {
    let mut count = 0;
    for n in 2..=6u64 {
        for m in 2..=6u64 {
            for r in 1..=10u64 {
                for s in 1..=10u64 {
                    let a = matrix_leavitt_iso(n, r, m, s).map_err(|e| e.to_string())?;
                    let b = higman_thompson_iso(n, r, m, s).map_err(|e| e.to_string())?;
                    let direct = m == n && r.gcd(&(n - 1)) == s.gcd(&(n - 1));
                    ensure(a == b && a == direct, format!("disagree at ({n},{r}) vs ({m},{s})"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} tuples agree"))
}

fn smith_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..100 {
        let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        ensure(&(&s.u * &m) * &s.v == s.d, format!("U M V != D for matrix {k}"))?;
        let unimodular = |x: &IntMatrix| x.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
        ensure(unimodular(&s.u) && unimodular(&s.v), format!("transform not unimodular for matrix {k}"))?;
        for i in 0..4 {
            for j in 0..4 {
                ensure(i == j || s.d.get(i, j).is_zero(), "D is not diagonal")?;
            }
        }
        for w in s.diagonal.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                !w[0].is_negative() && w[1].is_multiple_of(&w[0])
            };
            ensure(ok, format!("divisibility fails for matrix {k}"))?;
        }
        let det = m.determinant().map_err(|e| e.to_string())?;
        let prod: BigInt = s.diagonal.iter().product();
        ensure(prod == det.abs(), format!("diagonal product differs from |det| for matrix {k}"))?;
    }
    Ok("100 matrices".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("worked firing trace", 1, worked_trace),
        ("3x3 grid figure", 1, grid_figure),
        ("201x201 symmetric stabilization", 30, fractal_symmetry),
        ("sandpile monoid of F", 1, sandpile_monoid_f),
        ("presentation vs stable configurations", 60, oracle_equivalence),
        ("abelian property", 10, abelian_property),
        ("elementary shift equivalence example", 1, elementary_example),
        ("invariants of A3 and B3", 1, invariant_engine),
        ("Fibonacci cone", 5, fibonacci_cone),
        ("simplicity of the three example graphs", 1, example_classification),
        ("gcd theorems", 1, gcd_theorems),
        ("Smith normal form oracle", 5, smith_oracle),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= Duration::from_secs(*limit) => format!("PASS  {detail}"),
            Ok(_) => format!("FAIL  over the {limit} s limit"),
            Err(e) => format!("FAIL  {e}"),
        };
        if verdict.starts_with("FAIL") {
            failures += 1;
        }
        println!("criterion {:>2} [{name}] {:.3}s {verdict}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
