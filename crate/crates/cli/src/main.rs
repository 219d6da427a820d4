//! `multipath` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 infeasible instance,
//! 3 failed verification.

mod bench;
mod check;
mod schema;
mod solve;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use multipath::generate::generate_outconnected;
use multipath::io::{parse_graph_with, write_graph, ParseOptions};
use multipath::par::Execution;
use multipath::{Digraph, VertexId};

use crate::bench::{BenchArgs, Density, CSV_HEADER};
use crate::schema::{Level, Mode, SolveResult};
use crate::solve::{Infeasible, SolveArgs};

#[derive(Debug, Parser)]
#[command(name = "multipath", version, about = "Shortest p edge-disjoint paths and multipath preservers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random p-edge-outconnected graph rooted at vertex 1.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long = "p-connected")]
        p_connected: usize,
        #[arg(long = "extra-edges", default_value_t = 0)]
        extra_edges: usize,
        #[arg(long = "max-cost", default_value_t = 100)]
        max_cost: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every target and build a preserver.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t = Mode::Engine)]
        mode: Mode,
        /// Vertex-disjoint instead of edge-disjoint paths.
        #[arg(long = "vertex-disjoint")]
        vertex_disjoint: bool,
        /// Report sigma(t) = min(p, lambda(t)) paths instead of failing.
        #[arg(long = "allow-underconnected")]
        allow_underconnected: bool,
        /// Include every phase's preserver and solutions in the output.
        #[arg(long = "keep-intermediate")]
        keep_intermediate: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Decimal places allowed in input costs.
        #[arg(long = "cost-scale", default_value_t = 0)]
        cost_scale: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solve result against the graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Full)]
        level: Level,
        #[arg(long = "cost-scale", default_value_t = 0)]
        cost_scale: u32,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the engine against per-target successive shortest paths.
    Bench {
        #[arg(long = "n-list", value_delimiter = ',', default_value = "100,200,400")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long, value_enum, default_value_t = Density::Dense)]
        density: Density,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long = "max-cost", default_value_t = 100)]
        max_cost: i64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<Infeasible>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn read_graph(path: &Path, cost_scale: u32) -> Result<(Digraph, VertexId)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph_with(&text, ParseOptions { cost_scale }).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            n,
            p_connected,
            extra_edges,
            max_cost,
            seed,
            out,
        } => {
            let g = generate_outconnected(n, p_connected, extra_edges, max_cost, seed)?;
            emit(out.as_deref(), &write_graph(&g, 0))?;
        }
        Command::Solve {
            input,
            p,
            mode,
            vertex_disjoint,
            allow_underconnected,
            keep_intermediate,
            threads,
            cost_scale,
            out,
        } => {
            let (g, s) = read_graph(&input, cost_scale)?;
            let args = SolveArgs {
                p,
                mode,
                vertex_disjoint,
                allow_underconnected,
                keep_intermediate,
                threads,
            };
            let res = solve::solve(&g, s, args)?;
            emit(out.as_deref(), &(serde_json::to_string_pretty(&res)? + "\n"))?;
        }
        Command::Verify {
            input,
            solution,
            level,
            cost_scale,
            threads,
            out,
        } => {
            let (g, s) = read_graph(&input, cost_scale)?;
            let text = fs::read_to_string(&solution).with_context(|| format!("reading {}", solution.display()))?;
            let res: SolveResult =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", solution.display()))?;
            let exec = if threads > 1 {
                Execution::Parallel
            } else {
                Execution::Sequential
            };
            let report = multipath::par::with_threads(threads, || check::verify(&g, s, &res, level, exec));
            for notice in &report.notices {
                eprintln!("note: {notice}");
            }
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAILED {}: {}", c.name, c.failures.join("; "));
            }
            emit(out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
            if !report.passed {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Bench {
            n_list,
            p,
            density,
            seed,
            reps,
            max_cost,
            threads,
            out,
        } => {
            let rows = bench::run(&BenchArgs {
                n_list,
                p,
                density,
                seed,
                reps,
                max_cost,
                threads,
            })?;
            let mut csv = String::from(CSV_HEADER);
            csv.push('\n');
            for row in &rows {
                csv.push_str(&row.to_csv());
                csv.push('\n');
            }
            emit(out.as_deref(), &csv)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
