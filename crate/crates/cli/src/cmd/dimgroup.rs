use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Subcommand, ValueEnum};
use monodyn::dimension::{fib_cone_member, DimElement, DimGroup, Direction, Equality, Positivity};
use monodyn::IntMatrix;
use serde_json::json;

use super::read_matrix;
use crate::report::Report;
use crate::Ctx;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Dir {
    Forward,
    Backward,
}

#[derive(Debug, Subcommand)]
pub enum DimCmd {
    /// Whether two elements `[v1 v2 ...]@stage` are equal in the direct limit.
    Equal {
        matrix: PathBuf,
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Whether an element lies in the positive cone.
    Positive {
        matrix: PathBuf,
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Apply the shift automorphism (or its inverse) and normalize.
    Shift {
        matrix: PathBuf,
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(long, value_enum, default_value_t = Dir::Forward)]
        direction: Dir,
    },
    /// Membership of (m, n) in the Fibonacci cone, with the matrix-power check alongside.
    Fib {
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
}

fn group(path: &Path) -> Result<DimGroup> {
    Ok(DimGroup::new(read_matrix(path)?)?)
}

fn element(g: &DimGroup, s: &str) -> Result<DimElement> {
    let x = DimElement::parse(s)?;
    g.check(&x).with_context(|| format!("element `{s}`"))?;
    Ok(x)
}

fn positivity_fields(p: &Positivity) -> (&'static str, serde_json::Value) {
    match p {
        Positivity::Positive { power } => ("positive", json!(power)),
        Positivity::NotPositive { power } => ("not_positive", json!(power)),
        Positivity::Inconclusive { .. } => ("inconclusive", json!(null)),
    }
}

impl DimCmd {
    pub fn run(&self, ctx: &Ctx) -> Result<Report> {
        let max_power = ctx.bounds.max_power;
        match self {
            DimCmd::Equal { matrix, first, second } => {
                let g = group(matrix)?;
                let x = element(&g, first)?;
                let y = element(&g, second)?;
                let (verdict, stage) = match g.equal(&x, &y, max_power)? {
                    Equality::Yes { stage } => ("yes", Some(stage)),
                    Equality::No => ("no", None),
                    Equality::Inconclusive { .. } => ("inconclusive", None),
                };
                let text = match stage {
                    Some(s) => format!("{verdict} (agree at stage {s})\n"),
                    None => format!("{verdict}\n"),
                };
                let fields = json!({
                    "first": x.to_string(),
                    "second": y.to_string(),
                    "verdict": verdict,
                    "stage": stage,
                    "max_power": max_power,
                });
                Ok(Report::new("dim_equal", fields, text).negative_if(verdict == "no"))
            }
            DimCmd::Positive { matrix, element: e } => {
                let g = group(matrix)?;
                let x = element(&g, e)?;
                let (verdict, power) = positivity_fields(&g.positive(&x, max_power)?);
                let fields = json!({
                    "element": x.to_string(),
                    "verdict": verdict,
                    "power": power,
                    "max_power": max_power,
                });
                Ok(Report::new("dim_positive", fields, format!("{verdict}\n")).negative_if(verdict == "not_positive"))
            }
            DimCmd::Shift {
                matrix,
                element: e,
                direction,
            } => {
                let g = group(matrix)?;
                let x = element(&g, e)?;
                let d = match direction {
                    Dir::Forward => Direction::Forward,
                    Dir::Backward => Direction::Backward,
                };
                let y = g.normalize(&g.shift(&x, d));
                let fields = json!({"element": x.to_string(), "direction": d, "result": y.to_string()});
                Ok(Report::new("dim_shift", fields, format!("{y}\n")))
            }
            DimCmd::Fib { m, n } => {
                let member = fib_cone_member(*m, *n);
                let g = DimGroup::new(IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]))?;
                let (oracle, power) = positivity_fields(&g.positive(&DimElement::new(&[*m, *n], 0), max_power)?);
                let fields = json!({
                    "m": m,
                    "n": n,
                    "member": member,
                    "power_check": oracle,
                    "power": power,
                });
                Ok(Report::new("fib_cone", fields, format!("{member}\n")).negative_if(!member))
            }
        }
    }
}
