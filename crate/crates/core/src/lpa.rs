//! Graph conditions from Leavitt path algebra theory, the gcd isomorphism
//! criteria, and a bounded comparison of graph monoid invariants.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::monoid::{enumerate_monoid, graph_monoid_presentation, GroupCompletion, IsoSearch, MonoidError, MonoidPresentation};
use crate::shifteq::{invariants_report, se_search, InvariantReport, SEWitness, SeOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpaError {
    #[error("parameters need n, m >= 2 and r, s >= 1")]
    OutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Unreached {
    Sink { name: String },
    Cycle { component: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FailingCondition {
    None,
    /// `vertex` has no path to `unreached`.
    Cofinality { vertex: String, unreached: Unreached },
    ExitlessCycle { cycle: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicityVerdict {
    pub simple: bool,
    pub failing_condition: FailingCondition,
}

/// Every vertex reaches every sink and every cycle, and every cycle has an exit.
pub fn lpa_simple(g: &Graph) -> SimplicityVerdict {
    let names = |vs: &[usize]| vs.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
    let mut targets: Vec<(usize, Unreached)> = g
        .sinks()
        .into_iter()
        .map(|s| {
            (
                s,
                Unreached::Sink {
                    name: g.name(s).to_string(),
                },
            )
        })
        .collect();
    for comp in g.strongly_connected_components() {
        if g.component_has_cycle(&comp) {
            targets.push((comp[0], Unreached::Cycle { component: names(&comp) }));
        }
    }
    for (t, unreached) in targets {
        let reaching = g.reaching(t);
        if let Some(v) = (0..g.vertex_count()).find(|&v| !reaching[v]) {
            return SimplicityVerdict {
                simple: false,
                failing_condition: FailingCondition::Cofinality {
                    vertex: g.name(v).to_string(),
                    unreached,
                },
            };
        }
    }
    match g.exitless_cycle() {
        Some(cycle) => SimplicityVerdict {
            simple: false,
            failing_condition: FailingCondition::ExitlessCycle { cycle: names(&cycle) },
        },
        None => SimplicityVerdict {
            simple: true,
            failing_condition: FailingCondition::None,
        },
    }
}

/// Whether every cycle has an exit.
pub fn lpa_zorn(g: &Graph) -> bool {
    g.every_cycle_has_exit().every_cycle_has_exit
}

fn check_params(n: u64, r: u64, m: u64, s: u64) -> Result<(), LpaError> {
    if n < 2 || m < 2 || r < 1 || s < 1 {
        Err(LpaError::OutOfRange)
    } else {
        Ok(())
    }
}

/// `M_r(L(1, n)) ≅ M_s(L(1, m))`: `n = m` and `r`, `s` generate the same
/// subgroup of `Z/(n-1)`.
pub fn matrix_leavitt_iso(n: u64, r: u64, m: u64, s: u64) -> Result<bool, LpaError> {
    check_params(n, r, m, s)?;
    if n != m {
        return Ok(false);
    }
    if n == 2 {
        return Ok(true);
    }
    // the cyclic subgroup generated by r in Z/(n-1) is determined by its order
    let k = n - 1;
    let order = |x: u64| k / x.gcd(&k);
    Ok(order(r % k) == order(s % k))
}

/// `G⁺_{n,r} ≅ G⁺_{m,s}` for the Higman–Thompson groups.
pub fn higman_thompson_iso(n: u64, r: u64, m: u64, s: u64) -> Result<bool, LpaError> {
    check_params(n, r, m, s)?;
    Ok(n == m && r.gcd(&(n - 1)) == s.gcd(&(m - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Plain,
    Graded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompareBounds {
    pub monoid_elements: usize,
    pub search_depth: usize,
    /// Generator assignments tried by the isomorphism search.
    pub max_candidates: u64,
    pub max_lag: u32,
    pub coeff_bound: u32,
    /// Compare sandpile monoids (weights = outdegrees, sink = 0) instead of graph monoids.
    pub sandpile: bool,
}

impl Default for CompareBounds {
    fn default() -> Self {
        CompareBounds {
            monoid_elements: 10_000,
            search_depth: 6,
            max_candidates: 1_000_000,
            max_lag: 4,
            coeff_bound: 2,
            sandpile: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IsoWitness {
    /// The two graphs are identical.
    Identity,
    /// An order-unit preserving isomorphism of the enumerated monoids.
    Monoid {
        /// Image of each element of the first table in the second.
        element_map: Vec<usize>,
        /// Each generator of the first monoid with its image as a term over the second.
        generator_images: Vec<(String, String)>,
    },
    ShiftEquivalence {
        witness: SEWitness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Mismatch {
    Size { first: usize, second: usize },
    /// Exhaustive search over generator images found no isomorphism sending unit to unit.
    NoUnitPreservingIso { size: usize, candidates: u64 },
    GroupCompletion { first: GroupCompletion, second: GroupCompletion },
    ShiftInvariants { report: InvariantReport },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CompareVerdict {
    IsoWitnessFound { witness: IsoWitness },
    NotIso { mismatch: Mismatch },
    Unknown { bounds: CompareBounds },
}

/// Compares graph monoids (plain) or adjacency-matrix shift equivalence data
/// (graded), giving verdicts only with a witness or a mismatch.
pub fn kp_compare(e: &Graph, f: &Graph, mode: CompareMode, bounds: &CompareBounds) -> Result<CompareVerdict, MonoidError> {
    if e == f {
        return Ok(CompareVerdict::IsoWitnessFound {
            witness: IsoWitness::Identity,
        });
    }
    match mode {
        CompareMode::Plain => compare_plain(e, f, bounds),
        CompareMode::Graded => Ok(compare_graded(e, f, bounds)),
    }
}

fn presentation(g: &Graph, bounds: &CompareBounds) -> Result<MonoidPresentation, MonoidError> {
    graph_monoid_presentation(g, bounds.sandpile, bounds.sandpile)
}

fn compare_plain(e: &Graph, f: &Graph, bounds: &CompareBounds) -> Result<CompareVerdict, MonoidError> {
    let pe = presentation(e, bounds)?;
    let pf = presentation(f, bounds)?;
    let te = enumerate_monoid(&pe, bounds.monoid_elements, bounds.search_depth);
    let tf = enumerate_monoid(&pf, bounds.monoid_elements, bounds.search_depth);
    if let (Ok(te), Ok(tf)) = (&te, &tf) {
        if te.len() != tf.len() {
            return Ok(CompareVerdict::NotIso {
                mismatch: Mismatch::Size {
                    first: te.len(),
                    second: tf.len(),
                },
            });
        }
        let unit = (te.evaluate(&pe.order_unit()), tf.evaluate(&pf.order_unit()));
        return Ok(match te.find_isomorphism(tf, Some(unit), bounds.max_candidates) {
            IsoSearch::Found(map) => {
                let generator_images = te
                    .generator_elements
                    .iter()
                    .zip(pe.generators())
                    .map(|(&g, name)| (name.clone(), pf.format_term(&tf.elements[map[g]])))
                    .collect();
                CompareVerdict::IsoWitnessFound {
                    witness: IsoWitness::Monoid {
                        element_map: map,
                        generator_images,
                    },
                }
            }
            IsoSearch::NoneExists => CompareVerdict::NotIso {
                mismatch: Mismatch::NoUnitPreservingIso {
                    size: te.len(),
                    candidates: (tf.len() as u64).saturating_pow(te.generator_elements.len() as u32),
                },
            },
            IsoSearch::GaveUp => CompareVerdict::Unknown { bounds: *bounds },
        });
    }
    let (ge, gf) = (pe.group_completion(), pf.group_completion());
    if ge != gf {
        return Ok(CompareVerdict::NotIso {
            mismatch: Mismatch::GroupCompletion { first: ge, second: gf },
        });
    }
    Ok(CompareVerdict::Unknown { bounds: *bounds })
}

fn compare_graded(e: &Graph, f: &Graph, bounds: &CompareBounds) -> CompareVerdict {
    let (a, b) = (e.adjacency_matrix(), f.adjacency_matrix());
    let report = invariants_report(&a, &b).expect("adjacency matrices are square");
    if report.is_obstruction() {
        return CompareVerdict::NotIso {
            mismatch: Mismatch::ShiftInvariants { report },
        };
    }
    match se_search(&a, &b, bounds.max_lag, bounds.coeff_bound).expect("adjacency matrices are square") {
        SeOutcome::Found { witness } => CompareVerdict::IsoWitnessFound {
            witness: IsoWitness::ShiftEquivalence { witness },
        },
        SeOutcome::NotFound { .. } => CompareVerdict::Unknown { bounds: *bounds },
    }
}
