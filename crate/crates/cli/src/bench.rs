use std::time::Instant;

use anyhow::{bail, Result};
use clap::ValueEnum;
use multipath::engine::{self, EngineOptions};
use multipath::generate::generate_outconnected;
use multipath::oracle::ssp_fast;
use multipath::par::{self, Execution};
use multipath::Digraph;

pub const CSV_HEADER: &str = "n,m,p,engine_ms,baseline_ms,ratio";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Density {
    /// About `4n` edges.
    Sparse,
    /// About `n^2 / 2` edges.
    Dense,
}

#[derive(Debug, Clone)]
pub struct BenchArgs {
    pub n_list: Vec<usize>,
    pub p: usize,
    pub density: Density,
    pub seed: u64,
    pub reps: usize,
    pub max_cost: i64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub engine_ms: f64,
    pub baseline_ms: f64,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.engine_ms / self.baseline_ms
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.3},{:.3},{:.4}",
            self.n,
            self.m,
            self.p,
            self.engine_ms,
            self.baseline_ms,
            self.ratio()
        )
    }
}

pub fn instance(n: usize, p: usize, density: Density, max_cost: i64, seed: u64) -> Result<Digraph> {
    let target_m = match density {
        Density::Sparse => 4 * n,
        Density::Dense => n * n / 2,
    };
    let extra = target_m.saturating_sub(p * (n - 1));
    Ok(generate_outconnected(n, p, extra, max_cost, seed)?)
}

/// Median wall-clock milliseconds of `reps` runs after one discarded warm-up.
pub fn median_ms(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let times = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    median(times)
}

pub fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn run(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }
    if args.p == 0 {
        bail!("--p must be at least 1");
    }
    let exec = if args.threads > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    let mut rows = Vec::with_capacity(args.n_list.len());
    for (i, &n) in args.n_list.iter().enumerate() {
        if n <= args.p {
            bail!("n={n} must exceed p={}", args.p);
        }
        let g = instance(n, args.p, args.density, args.max_cost, args.seed.wrapping_add(i as u64))?;
        let targets: Vec<usize> = (1..n).collect();
        let (engine_ms, baseline_ms) = par::with_threads(args.threads, || {
            let engine_ms = median_ms(args.reps, || {
                engine::run(
                    &g,
                    0,
                    args.p,
                    EngineOptions {
                        execution: exec,
                        ..Default::default()
                    },
                )
                .expect("generated instances are p-outconnected");
            });
            let baseline_ms = median_ms(args.reps, || {
                par::map(exec, &targets, |&t| ssp_fast(&g, 0, t, args.p));
            });
            (engine_ms, baseline_ms)
        });
        let row = BenchRow {
            n,
            m: g.edge_count(),
            p: args.p,
            engine_ms,
            baseline_ms,
        };
        log::info!("{}", row.to_csv());
        rows.push(row);
    }
    Ok(rows)
}
