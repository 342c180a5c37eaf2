use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use serde_json::json;

use super::read_graph;
use crate::report::{self, Report};
use crate::Ctx;

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Sinks, strongly connected components, degrees and cycle exits.
    Check { graph: PathBuf },
    /// Adjacency matrix in vertex order.
    Matrix { graph: PathBuf },
}

impl GraphCmd {
    pub fn run(&self, _ctx: &Ctx) -> Result<Report> {
        match self {
            GraphCmd::Check { graph } => {
                let g = read_graph(graph)?;
                let s = g.structure_report();
                let exits = g.every_cycle_has_exit();
                let mut text = format!(
                    "vertices: {}\nedges: {}\nsinks: {}\nstrongly connected: {}\ncomponents: {}\nsandpile sink: {}\n",
                    g.names().join(" "),
                    g.edge_count(),
                    s.sinks.join(" "),
                    s.strongly_connected,
                    s.scc_partition.iter().map(|c| format!("{{{}}}", c.join(" "))).collect::<Vec<_>>().join(" "),
                    s.sandpile_sink.as_deref().unwrap_or("none"),
                );
                text += &match &exits.witness {
                    None => "every cycle has an exit\n".to_string(),
                    Some(c) => format!("exit-less cycle: {}\n", c.join(" ")),
                };
                let fields = json!({
                    "vertices": g.names(),
                    "edges": g.edge_count(),
                    "sinks": s.sinks,
                    "strongly_connected": s.strongly_connected,
                    "components": s.scc_partition,
                    "sandpile": s.sandpile,
                    "sandpile_sink": s.sandpile_sink,
                    "outdegrees": report::named_counts(g.names(), &s.outdegrees),
                    "indegrees": report::named_counts(g.names(), &s.indegrees),
                    "every_cycle_has_exit": exits.every_cycle_has_exit,
                    "exitless_cycle": exits.witness,
                });
                Ok(Report::new("graph_check", fields, text))
            }
            GraphCmd::Matrix { graph } => {
                let g = read_graph(graph)?;
                let a = g.adjacency_matrix();
                let fields = json!({"vertices": g.names(), "matrix": report::matrix(&a)});
                Ok(Report::new("adjacency_matrix", fields, a.to_text()))
            }
        }
    }
}
