use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use monodyn::sandpile::{
    format_trace, make_grid, render_ppm, sandpile_monoid, stabilize, stabilize_grid, stabilize_random_order,
    stabilize_traced, stable_add, ChipConfig, GridMode, GridSpec, Palette,
};
use monodyn::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{monoid::table_report, read_graph, read_text};
use crate::report::{self, Report};
use crate::Ctx;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Open,
    Closed,
}

impl From<Mode> for GridMode {
    fn from(m: Mode) -> GridMode {
        match m {
            Mode::Open => GridMode::Open,
            Mode::Closed => GridMode::Closed,
        }
    }
}

/// `r,c,n`: `n` chips on row `r`, column `c`.
#[derive(Debug, Clone, Copy)]
pub struct Placement {
    row: usize,
    col: usize,
    chips: u64,
}

impl FromStr for Placement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || format!("expected `row,col,chips`, got `{s}`");
        let [r, c, n] = parts[..] else {
            return Err(bad());
        };
        Ok(Placement {
            row: r.parse().map_err(|_| bad())?,
            col: c.parse().map_err(|_| bad())?,
            chips: n.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, clap::Args)]
pub struct GridArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, value_enum, default_value_t = Mode::Open)]
    mode: Mode,
}

impl GridArgs {
    fn spec(&self) -> Result<GridSpec> {
        if self.rows == 0 || self.cols == 0 {
            bail!("grid dimensions must be positive");
        }
        Ok(GridSpec::new(self.rows, self.cols, self.mode.into()))
    }
}

#[derive(Debug, Subcommand)]
pub enum SandpileCmd {
    /// Stabilize a configuration (`<vertex> <count>` lines).
    Stabilize {
        graph: PathBuf,
        config: PathBuf,
        /// Print every intermediate configuration.
        #[arg(long, conflicts_with = "random_order")]
        trace: bool,
        /// Fire one uniformly chosen unstable vertex at a time (uses --seed).
        #[arg(long)]
        random_order: bool,
    },
    /// Stable sum of two stable configurations.
    Add { graph: PathBuf, first: PathBuf, second: PathBuf },
    /// Every stable configuration with the addition table.
    Monoid { graph: PathBuf },
    /// Stabilize chips placed on a grid; optionally write a PPM image.
    Grid {
        #[command(flatten)]
        grid: GridArgs,
        /// Chips to place, as `row,col,chips`; repeatable.
        #[arg(long = "place", required = true)]
        places: Vec<Placement>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilize a grid configuration file (cells named `row,col`) and write a PPM image.
    Render {
        #[command(flatten)]
        grid: GridArgs,
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn config_term(g: &Graph, c: &ChipConfig) -> String {
    let parts: Vec<String> = (0..g.vertex_count())
        .filter(|&v| c.get(v) > 0)
        .map(|v| {
            let name = g.name(v);
            match c.get(v) {
                1 => name.to_string(),
                n if name.starts_with(|ch: char| ch.is_ascii_digit()) => format!("{n}*{name}"),
                n => format!("{n}{name}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn read_config(g: &Graph, path: &Path) -> Result<ChipConfig> {
    ChipConfig::parse(g, &read_text(path)?).with_context(|| format!("parsing configuration {}", path.display()))
}

fn write_image(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn grid_report(spec: &GridSpec, g: &Graph, c: &ChipConfig, ctx: &Ctx, out: Option<&Path>) -> Result<Report> {
    let cells: Vec<u64> = c.counts()[..spec.cells()].to_vec();
    let st = stabilize_grid(spec, &cells, ctx.bounds.firing_budget)?;
    let stable = st.to_stabilized(spec);
    if let Some(p) = out {
        write_image(p, &render_ppm(spec, &stable.config, &Palette::default()))?;
    }
    let rows: Vec<Vec<u64>> = st.cells.chunks(spec.cols).map(<[u64]>::to_vec).collect();
    let firings: u64 = st.odometer.iter().sum();
    let mut text: String = rows
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    text += &format!("absorbed: {}\nfirings: {firings}\n", st.absorbed);
    if let Some(p) = out {
        text += &format!("image: {}\n", p.display());
    }
    let fields = json!({
        "rows": spec.rows,
        "cols": spec.cols,
        "mode": spec.mode,
        "cells": rows,
        "absorbed": st.absorbed,
        "firings": firings,
        "stable_term": config_term(g, &stable.config),
        "image": out.map(|p| p.display().to_string()),
    });
    Ok(Report::new("grid", fields, text))
}

impl SandpileCmd {
    pub fn run(&self, ctx: &Ctx) -> Result<Report> {
        let budget = ctx.bounds.firing_budget;
        match self {
            SandpileCmd::Stabilize {
                graph,
                config,
                trace,
                random_order,
            } => {
                let g = read_graph(graph)?;
                let c = read_config(&g, config)?;
                let (st, trace_line) = if *trace {
                    let (st, t) = stabilize_traced(&g, &c, budget)?;
                    (st, Some(format_trace(&g, &t)))
                } else if *random_order {
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
                    (stabilize_random_order(&g, &c, &mut rng, budget)?, None)
                } else {
                    (stabilize(&g, &c, budget)?, None)
                };
                let term = config_term(&g, &st.config);
                let mut text = String::new();
                if let Some(t) = &trace_line {
                    text += t;
                    text += "\n";
                }
                text += &format!(
                    "stable: {term}\nabsorbed: {}\nfirings: {}\n",
                    st.config.absorbed(),
                    st.odometer.total()
                );
                let fields = json!({
                    "start": config_term(&g, &c),
                    "stable": report::named_counts(g.names(), st.config.counts()),
                    "stable_term": term,
                    "absorbed": st.config.absorbed(),
                    "odometer": report::named_counts(g.names(), st.odometer.firings()),
                    "firings": st.odometer.total(),
                    "trace": trace_line,
                });
                Ok(Report::new("stabilization", fields, text))
            }
            SandpileCmd::Add { graph, first, second } => {
                let g = read_graph(graph)?;
                let a = read_config(&g, first)?;
                let b = read_config(&g, second)?;
                let sum = stable_add(&g, &a, &b, budget)?;
                let term = config_term(&g, &sum);
                let fields = json!({
                    "first": config_term(&g, &a),
                    "second": config_term(&g, &b),
                    "sum": report::named_counts(g.names(), sum.counts()),
                    "sum_term": term,
                });
                Ok(Report::new("stable_add", fields, format!("{term}\n")))
            }
            SandpileCmd::Monoid { graph } => {
                let g = read_graph(graph)?;
                let t = sandpile_monoid(&g, ctx.bounds.monoid_elements)?;
                Ok(table_report(&t))
            }
            SandpileCmd::Grid { grid, places, out } => {
                let spec = grid.spec()?;
                let g = make_grid(&spec);
                let mut c = ChipConfig::zero(&g);
                for p in places {
                    spec.place(&g, &mut c, p.row, p.col, p.chips)?;
                }
                grid_report(&spec, &g, &c, ctx, out.as_deref())
            }
            SandpileCmd::Render { grid, config, out } => {
                let spec = grid.spec()?;
                let g = make_grid(&spec);
                let c = read_config(&g, config)?;
                grid_report(&spec, &g, &c, ctx, Some(out))
            }
        }
    }
}
