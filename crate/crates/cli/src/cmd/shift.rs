use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use monodyn::matrix::format_poly;
use monodyn::shifteq::{
    invariants_report, se_search, sse_search, verify_elementary, verify_se, verify_sse_chain, ESWitness,
    InvariantReport, InvariantVerdict, MatrixInvariants, SEWitness, SSEChain, SeOutcome, SseBounds, SseOutcome,
};
use serde_json::{json, Value};

use super::{read_matrix, read_text};
use crate::report::{self, Report};
use crate::Ctx;

#[derive(Debug, Subcommand)]
pub enum ShiftCmd {
    /// Check A = RS and B = SR with R, S nonnegative.
    VerifyEs { a: PathBuf, b: PathBuf, r: PathBuf, s: PathBuf },
    /// Check A^lag = RS, B^lag = SR, AR = RB and SA = BS.
    VerifySe {
        a: PathBuf,
        b: PathBuf,
        r: PathBuf,
        s: PathBuf,
        #[arg(long)]
        lag: u32,
    },
    /// Check a chain file of blank-line separated blocks A0, R0, S0, A1, ...
    VerifyChain { chain: PathBuf },
    /// Bounded search for a strong shift equivalence chain.
    SearchSse {
        a: PathBuf,
        b: PathBuf,
        /// Longest chain tried.
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },
    /// Bounded search for a shift equivalence witness.
    SearchSe { a: PathBuf, b: PathBuf },
    /// Bowen-Franks groups and characteristic polynomials away from zero.
    Invariants { a: PathBuf, b: PathBuf },
}

pub fn chain_json(c: &SSEChain) -> Value {
    let links: Vec<Value> = c.links.iter().map(es_json).collect();
    json!({
        "matrices": c.matrices.iter().map(report::matrix).collect::<Vec<_>>(),
        "links": links,
        "text": c.to_text(),
    })
}

fn es_json(w: &ESWitness) -> Value {
    json!({"r": report::matrix(&w.r), "s": report::matrix(&w.s)})
}

pub fn se_json(w: &SEWitness) -> Value {
    json!({"r": report::matrix(&w.r), "s": report::matrix(&w.s), "lag": w.lag})
}

fn matrix_invariants_json(m: &MatrixInvariants) -> Value {
    json!({
        "bowen_franks": m.bowen_franks.to_string(),
        "invariant_factors": report::ints(&m.bowen_franks.invariant_factors),
        "free_rank": m.bowen_franks.free_rank,
        "charpoly_core": format_poly(&m.charpoly_core),
    })
}

pub fn invariants_json(r: &InvariantReport) -> Value {
    let (verdict, differing) = match &r.verdict {
        InvariantVerdict::Obstruction { differing } => ("obstruction", differing.clone()),
        InvariantVerdict::NoObstruction => ("no_obstruction", Vec::new()),
    };
    json!({
        "a": matrix_invariants_json(&r.a),
        "b": matrix_invariants_json(&r.b),
        "verdict": verdict,
        "differing": differing,
    })
}

fn invariants_text(r: &InvariantReport) -> String {
    let line = |name: &str, m: &MatrixInvariants| {
        format!(
            "{name}: Bowen-Franks {}, polynomial {}\n",
            m.bowen_franks,
            format_poly(&m.charpoly_core)
        )
    };
    let verdict = match &r.verdict {
        InvariantVerdict::Obstruction { differing } => format!("obstruction: {}\n", differing.join(", ")),
        InvariantVerdict::NoObstruction => "no obstruction\n".into(),
    };
    line("A", &r.a) + &line("B", &r.b) + &verdict
}

fn bool_report(kind: &str, ok: bool) -> Report {
    Report::new(kind, json!({"result": ok}), format!("{ok}\n")).negative_if(!ok)
}

impl ShiftCmd {
    pub fn run(&self, ctx: &Ctx) -> Result<Report> {
        let bounds = &ctx.bounds;
        match self {
            ShiftCmd::VerifyEs { a, b, r, s } => {
                let w = ESWitness {
                    r: read_matrix(r)?,
                    s: read_matrix(s)?,
                };
                let ok = verify_elementary(&read_matrix(a)?, &read_matrix(b)?, &w)?;
                Ok(bool_report("verify_es", ok))
            }
            ShiftCmd::VerifySe { a, b, r, s, lag } => {
                let w = SEWitness {
                    r: read_matrix(r)?,
                    s: read_matrix(s)?,
                    lag: *lag,
                };
                let ok = verify_se(&read_matrix(a)?, &read_matrix(b)?, &w)?;
                Ok(bool_report("verify_se", ok))
            }
            ShiftCmd::VerifyChain { chain } => {
                let c = SSEChain::parse(&read_text(chain)?)
                    .with_context(|| format!("parsing chain {}", chain.display()))?;
                let check = verify_sse_chain(&c);
                let text = match check.failing_index {
                    None => format!("{}\n", check.valid),
                    Some(i) => format!("false (fails at matrix {i})\n"),
                };
                let fields = json!({
                    "result": check.valid,
                    "links": c.len(),
                    "failing_index": check.failing_index,
                });
                Ok(Report::new("verify_chain", fields, text).negative_if(!check.valid))
            }
            ShiftCmd::SearchSse { a, b, max_depth } => {
                let sb = SseBounds {
                    max_depth: *max_depth,
                    max_inner_dim: bounds.inner_dim,
                    max_nodes: bounds.max_nodes,
                };
                match sse_search(&read_matrix(a)?, &read_matrix(b)?, &sb)? {
                    SseOutcome::Found { chain } => {
                        let text = format!("found a chain of {} links\n{}", chain.len(), chain.to_text());
                        let fields = json!({"outcome": "found", "chain": chain_json(&chain)});
                        Ok(Report::new("sse_search", fields, text))
                    }
                    SseOutcome::NotFound {
                        bounds: sb,
                        nodes,
                        exhausted,
                        truncated,
                    } => {
                        let fields = json!({
                            "outcome": "not_found",
                            "bounds": sb,
                            "nodes": nodes,
                            "exhausted": exhausted,
                            "truncated": truncated,
                        });
                        let text = format!("not found ({nodes} matrices visited)\n");
                        Ok(Report::new("sse_search", fields, text).negative_if(true))
                    }
                }
            }
            ShiftCmd::SearchSe { a, b } => {
                match se_search(&read_matrix(a)?, &read_matrix(b)?, bounds.max_lag, bounds.coeff_bound)? {
                    SeOutcome::Found { witness } => {
                        let text = format!(
                            "found a witness of lag {}\nR:\n{}S:\n{}",
                            witness.lag,
                            witness.r.to_text(),
                            witness.s.to_text()
                        );
                        let fields = json!({"outcome": "found", "witness": se_json(&witness)});
                        Ok(Report::new("se_search", fields, text))
                    }
                    SeOutcome::NotFound {
                        obstruction,
                        max_lag,
                        coeff_bound,
                        truncated,
                    } => {
                        let text = match &obstruction {
                            Some(r) => format!("not shift equivalent\n{}", invariants_text(r)),
                            None => "not found\n".into(),
                        };
                        let fields = json!({
                            "outcome": "not_found",
                            "obstruction": obstruction.as_ref().map(invariants_json),
                            "max_lag": max_lag,
                            "coeff_bound": coeff_bound,
                            "truncated": truncated,
                        });
                        Ok(Report::new("se_search", fields, text).negative_if(true))
                    }
                }
            }
            ShiftCmd::Invariants { a, b } => {
                let r = invariants_report(&read_matrix(a)?, &read_matrix(b)?)?;
                Ok(Report::new("invariants", invariants_json(&r), invariants_text(&r)).negative_if(r.is_obstruction()))
            }
        }
    }
}
