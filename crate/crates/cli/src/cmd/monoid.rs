use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use monodyn::dimension::talented_window;
use monodyn::monoid::{enumerate_monoid, graph_monoid_presentation, MonoidPresentation, MonoidTable, WordVerdict};
use serde_json::{json, Value};

use super::{read_graph, read_text};
use crate::report::Report;
use crate::Ctx;

#[derive(Debug, clap::Args)]
pub struct Source {
    /// Presentation file (`gens: ...` header) or graph file.
    source: PathBuf,
    /// For graph input: relations `w(v)·v = Σ r(e)` with weights (outdegrees by default).
    #[arg(long)]
    weighted: bool,
    /// For graph input: drop the unique sink generator.
    #[arg(long)]
    sink_zero: bool,
}

impl Source {
    fn load(&self) -> Result<MonoidPresentation> {
        let text = read_text(&self.source)?;
        let first = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty());
        if first.is_some_and(|l| l.starts_with("gens:")) {
            return MonoidPresentation::parse(&text)
                .with_context(|| format!("parsing presentation {}", self.source.display()));
        }
        let g = read_graph(&self.source)?;
        Ok(graph_monoid_presentation(&g, self.weighted, self.sink_zero)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum MonoidCmd {
    /// Print the presentation of a graph monoid (or normalize a presentation file).
    Present(Source),
    /// Decide whether two terms are equal, with a rewrite path when they are.
    Equal {
        #[command(flatten)]
        source: Source,
        first: String,
        second: String,
    },
    /// List every element with the addition table.
    Enumerate(Source),
}

#[derive(Debug, Subcommand)]
pub enum TalentedCmd {
    /// Presentation of the window with generators v(i), -k <= i <= k.
    Window {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Term over the window generators to shift.
        #[arg(long, requires = "steps", allow_hyphen_values = true)]
        element: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        steps: Option<i64>,
    },
}

fn term(gens: &[String], x: &[u64]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(x)
        .filter(|(_, &c)| c > 0)
        .map(|(g, &c)| match c {
            1 => g.clone(),
            _ if g.starts_with(|ch: char| ch.is_ascii_digit()) => format!("{c}*{g}"),
            _ => format!("{c}{g}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn presentation_json(p: &MonoidPresentation) -> Value {
    let rels: Vec<Value> = p
        .relations()
        .iter()
        .map(|r| json!({"lhs": p.format_term(&r.lhs), "rhs": p.format_term(&r.rhs)}))
        .collect();
    json!({"generators": p.generators(), "relations": rels, "text": p.to_text()})
}

pub fn table_report(t: &MonoidTable) -> Report {
    let names: Vec<String> = t.elements.iter().map(|e| term(&t.generators, e)).collect();
    let mut text = format!("{} elements\n", t.len());
    for (i, n) in names.iter().enumerate() {
        text += &format!("{i}: {n}\n");
    }
    text += "addition:\n";
    for row in &t.addition {
        text += &(row.iter().map(usize::to_string).collect::<Vec<_>>().join(" ") + "\n");
    }
    let fields = json!({
        "generators": t.generators,
        "size": t.len(),
        "elements": names,
        "generator_elements": t.generator_elements,
        "identity": t.identity,
        "addition": t.addition,
    });
    Report::new("monoid_table", fields, text)
}

fn parse_term(p: &MonoidPresentation, s: &str) -> Result<Vec<u64>> {
    p.parse_term(s).with_context(|| format!("parsing term `{s}`"))
}

impl MonoidCmd {
    pub fn run(&self, ctx: &Ctx) -> Result<Report> {
        let b = &ctx.bounds;
        match self {
            MonoidCmd::Present(src) => {
                let p = src.load()?;
                Ok(Report::new("presentation", presentation_json(&p), p.to_text()))
            }
            MonoidCmd::Equal { source, first, second } => {
                let p = source.load()?;
                let x = parse_term(&p, first)?;
                let y = parse_term(&p, second)?;
                let verdict = monodyn::monoid::words_equal(&p, &x, &y, b.search_depth);
                let (name, path, negative) = match &verdict {
                    WordVerdict::Yes { path } => {
                        let mut terms = vec![p.format_term(&path.start)];
                        terms.extend(path.steps.iter().map(|s| p.format_term(&s.result)));
                        ("yes", Some(terms), false)
                    }
                    WordVerdict::No => ("no", None, true),
                    WordVerdict::Unknown => ("unknown", None, false),
                };
                let mut text = format!("{name}\n");
                if let Some(ts) = &path {
                    text += &(ts.join(" = ") + "\n");
                }
                let fields = json!({
                    "first": p.format_term(&x),
                    "second": p.format_term(&y),
                    "verdict": name,
                    "path": path,
                    "search_depth": b.search_depth,
                });
                Ok(Report::new("word_problem", fields, text).negative_if(negative))
            }
            MonoidCmd::Enumerate(src) => {
                let p = src.load()?;
                match enumerate_monoid(&p, b.monoid_elements, b.search_depth) {
                    Ok(t) => Ok(table_report(&t)),
                    Err(e) => {
                        let fields = json!({
                            "failure": e,
                            "monoid_elements": b.monoid_elements,
                            "search_depth": b.search_depth,
                        });
                        Ok(Report::new("enumeration_failure", fields, format!("{e}\n")).negative_if(true))
                    }
                }
            }
        }
    }
}

fn window_report(graph: &Path, radius: usize, element: Option<&str>, steps: Option<i64>) -> Result<Report> {
    let g = read_graph(graph)?;
    let w = talented_window(&g, radius)?;
    let p = &w.presentation;
    let mut fields = presentation_json(p);
    let mut text = p.to_text();
    fields["radius"] = json!(radius);
    if let (Some(e), Some(k)) = (element, steps) {
        let x = parse_term(p, e)?;
        let shifted = w.shift(&x, k)?;
        let t = p.format_term(&shifted);
        text += &format!("shift by {k}: {t}\n");
        fields["element"] = json!(p.format_term(&x));
        fields["steps"] = json!(k);
        fields["shifted"] = json!(t);
    } else if element.is_some() {
        bail!("--element needs --steps");
    }
    Ok(Report::new("talented_window", fields, text))
}

impl TalentedCmd {
    pub fn run(&self, _ctx: &Ctx) -> Result<Report> {
        match self {
            TalentedCmd::Window {
                graph,
                radius,
                element,
                steps,
            } => window_report(graph, *radius, element.as_deref(), *steps),
        }
    }
}
