use std::path::PathBuf;

use anyhow::Result;
use clap::{Subcommand, ValueEnum};
use monodyn::lpa::{
    higman_thompson_iso, kp_compare, lpa_simple, lpa_zorn, matrix_leavitt_iso, CompareBounds, CompareMode,
    CompareVerdict, FailingCondition, IsoWitness, Mismatch, Unreached,
};
use monodyn::monoid::GroupCompletion;
use serde_json::{json, Value};

use super::read_graph;
use super::shift::{invariants_json, se_json};
use crate::report::{self, Report};
use crate::Ctx;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Plain,
    Graded,
}

#[derive(Debug, clap::Args)]
pub struct IsoArgs {
    #[arg(value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    r: u64,
    #[arg(value_parser = clap::value_parser!(u64).range(2..))]
    m: u64,
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    s: u64,
}

#[derive(Debug, Subcommand)]
pub enum LpaCmd {
    /// Simplicity: cofinality plus an exit on every cycle.
    Simple { graph: PathBuf },
    /// Every cycle has an exit.
    Zorn { graph: PathBuf },
    /// Matrix algebras over Leavitt algebras: M_r(L_n) against M_s(L_m).
    MatrixIso(IsoArgs),
    /// Higman-Thompson groups G_{n,r} against G_{m,s}.
    HtIso(IsoArgs),
    /// Compare two graphs by monoid isomorphism (plain) or shift equivalence (graded).
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Plain)]
        mode: Mode,
        /// Plain mode: compare sandpile monoids instead of graph monoids.
        #[arg(long)]
        sandpile: bool,
    },
}

fn unreached_json(u: &Unreached) -> Value {
    match u {
        Unreached::Sink { name } => json!({"type": "sink", "vertices": [name]}),
        Unreached::Cycle { component } => json!({"type": "cycle", "vertices": component}),
    }
}

fn failing_json(f: &FailingCondition) -> (Value, String) {
    match f {
        FailingCondition::None => (Value::Null, "simple".into()),
        FailingCondition::Cofinality { vertex, unreached } => {
            let target = match unreached {
                Unreached::Sink { name } => format!("sink {name}"),
                Unreached::Cycle { component } => format!("cycle through {}", component.join(" ")),
            };
            (
                json!({"condition": "cofinality", "vertex": vertex, "unreached": unreached_json(unreached)}),
                format!("not simple: {vertex} does not reach the {target}"),
            )
        }
        FailingCondition::ExitlessCycle { cycle } => (
            json!({"condition": "exitless_cycle", "cycle": cycle}),
            format!("not simple: cycle {} has no exit", cycle.join(" ")),
        ),
    }
}

fn completion_json(g: &GroupCompletion) -> Value {
    json!({"torsion": report::ints(&g.torsion), "free_rank": g.free_rank})
}

fn verdict_json(v: &CompareVerdict) -> (Value, String, bool) {
    match v {
        CompareVerdict::IsoWitnessFound { witness } => {
            let (w, text) = match witness {
                IsoWitness::Identity => (json!({"type": "identity"}), "identical graphs".to_string()),
                IsoWitness::Monoid {
                    element_map,
                    generator_images,
                } => {
                    let images: Vec<Value> =
                        generator_images.iter().map(|(g, t)| json!({"generator": g, "image": t})).collect();
                    let text = generator_images.iter().map(|(g, t)| format!("{g} -> {t}")).collect::<Vec<_>>().join(", ");
                    (
                        json!({"type": "monoid", "element_map": element_map, "generator_images": images}),
                        format!("monoid isomorphism: {text}"),
                    )
                }
                IsoWitness::ShiftEquivalence { witness } => (
                    json!({"type": "shift_equivalence", "witness": se_json(witness)}),
                    format!("shift equivalence of lag {}", witness.lag),
                ),
            };
            (json!({"verdict": "iso_witness_found", "witness": w}), format!("isomorphic ({text})"), false)
        }
        CompareVerdict::NotIso { mismatch } => {
            let (m, text) = match mismatch {
                Mismatch::Size { first, second } => (
                    json!({"invariant": "size", "first": first, "second": second}),
                    format!("sizes {first} and {second} differ"),
                ),
                Mismatch::NoUnitPreservingIso { size, candidates } => (
                    json!({"invariant": "no_unit_preserving_iso", "size": size, "candidates": candidates}),
                    format!("no unit-preserving isomorphism among {candidates} candidates"),
                ),
                Mismatch::GroupCompletion { first, second } => (
                    json!({"invariant": "group_completion", "first": completion_json(first), "second": completion_json(second)}),
                    "group completions differ".to_string(),
                ),
                Mismatch::ShiftInvariants { report } => (
                    json!({"invariant": "shift_invariants", "report": invariants_json(report)}),
                    "shift-equivalence invariants differ".to_string(),
                ),
            };
            (json!({"verdict": "not_iso", "mismatch": m}), format!("not isomorphic: {text}"), true)
        }
        CompareVerdict::Unknown { bounds } => (
            json!({"verdict": "unknown", "bounds": bounds}),
            "unknown within the bounds".to_string(),
            false,
        ),
    }
}

impl LpaCmd {
    pub fn run(&self, ctx: &Ctx) -> Result<Report> {
        match self {
            LpaCmd::Simple { graph } => {
                let v = lpa_simple(&read_graph(graph)?);
                let (failing, text) = failing_json(&v.failing_condition);
                let fields = json!({"simple": v.simple, "failing_condition": failing});
                Ok(Report::new("lpa_simple", fields, text + "\n").negative_if(!v.simple))
            }
            LpaCmd::Zorn { graph } => {
                let z = lpa_zorn(&read_graph(graph)?);
                Ok(Report::new("lpa_zorn", json!({"result": z}), format!("{z}\n")).negative_if(!z))
            }
            LpaCmd::MatrixIso(a) => {
                let ok = matrix_leavitt_iso(a.n, a.r, a.m, a.s)?;
                Ok(Report::new("iso", json!({"result": ok}), format!("{ok}\n")).negative_if(!ok))
            }
            LpaCmd::HtIso(a) => {
                let ok = higman_thompson_iso(a.n, a.r, a.m, a.s)?;
                Ok(Report::new("iso", json!({"result": ok}), format!("{ok}\n")).negative_if(!ok))
            }
            LpaCmd::Compare {
                first,
                second,
                mode,
                sandpile,
            } => {
                let b = &ctx.bounds;
                let bounds = CompareBounds {
                    monoid_elements: b.monoid_elements,
                    search_depth: b.search_depth,
                    max_candidates: b.max_candidates,
                    max_lag: b.max_lag,
                    coeff_bound: b.coeff_bound,
                    sandpile: *sandpile,
                };
                let mode = match mode {
                    Mode::Plain => CompareMode::Plain,
                    Mode::Graded => CompareMode::Graded,
                };
                let v = kp_compare(&read_graph(first)?, &read_graph(second)?, mode, &bounds)?;
                let (mut fields, text, negative) = verdict_json(&v);
                fields["mode"] = json!(mode);
                Ok(Report::new("kp_compare", fields, text + "\n").negative_if(negative))
            }
        }
    }
}
