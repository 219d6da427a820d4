use std::fmt;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use multipath::engine::{self, EngineError, EngineOptions, PhaseSnapshot, PhaseTiming};
use multipath::oracle::ssp_fast;
use multipath::par::{self, Execution};
use multipath::transforms::{self, split_vertices, strip_dummies, AugmentedGraph, TransformError};
use multipath::verify::{decompose, DecomposeMode};
use multipath::{Digraph, EdgeSet, VertexId};

use crate::schema::{Mode, PhaseRecord, PhaseSolution, PhaseTime, PreserverKind, SolveResult, TargetRecord, Timing};

#[derive(Debug, Clone, Copy)]
pub struct SolveArgs {
    pub p: usize,
    pub mode: Mode,
    pub vertex_disjoint: bool,
    pub allow_underconnected: bool,
    pub keep_intermediate: bool,
    pub threads: usize,
}

/// Some target has fewer than `p` disjoint paths and the caller did not
/// allow under-connected graphs. `vertex` is 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasible {
    pub vertex: VertexId,
    pub p: usize,
    pub vertex_disjoint: bool,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.vertex_disjoint { "vertex" } else { "edge" };
        write!(
            f,
            "NotOutconnected({}): vertex {} has fewer than {} {kind}-disjoint paths from the source; \
             rerun with --allow-underconnected",
            self.vertex,
            self.vertex + 1,
            self.p
        )
    }
}

impl std::error::Error for Infeasible {}

struct Solved {
    /// `(sigma, solution)` per vertex; `None` at the source.
    per_target: Vec<Option<(usize, EdgeSet)>>,
    preserver_kind: PreserverKind,
    preserver: Option<Vec<usize>>,
    phases: Vec<PhaseTiming>,
    intermediate: Option<Vec<PhaseRecord>>,
}

pub fn solve(g: &Digraph, s: VertexId, args: SolveArgs) -> Result<SolveResult> {
    if args.p == 0 {
        bail!("--p must be at least 1");
    }
    let exec = if args.threads > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    let start = Instant::now();
    let solved = par::with_threads(args.threads, || match args.mode {
        Mode::Engine => solve_engine(g, s, args, exec),
        Mode::SspBaseline => solve_baseline(g, s, args, exec),
    })?;
    let total_ms = start.elapsed().as_secs_f64() * 1e3;

    if !args.allow_underconnected {
        if let Some(t) = (0..g.vertex_count()).find(|&t| matches!(&solved.per_target[t], Some((k, _)) if *k < args.p)) {
            return Err(Infeasible {
                vertex: t,
                p: args.p,
                vertex_disjoint: args.vertex_disjoint,
            }
            .into());
        }
    }

    let mut targets = Vec::with_capacity(g.vertex_count().saturating_sub(1));
    for (t, entry) in solved.per_target.iter().enumerate() {
        let Some((sigma, sol)) = entry else { continue };
        let dec = decompose(g, sol, s, t, *sigma, DecomposeMode::Strict)
            .or_else(|_| decompose(g, sol, s, t, *sigma, DecomposeMode::Lenient))
            .with_context(|| format!("decomposing the solution for vertex {}", t + 1))?;
        targets.push(TargetRecord {
            t: t + 1,
            sigma: *sigma,
            total_cost: sol.cost(g),
            paths: dec
                .paths
                .iter()
                .map(|path| path.vertices.iter().map(|v| v + 1).collect())
                .collect(),
            edge_ids: sol.sorted(),
        });
    }

    Ok(SolveResult {
        n: g.vertex_count(),
        m: g.edge_count(),
        source: s + 1,
        p: args.p,
        mode: args.mode,
        vertex_disjoint: args.vertex_disjoint,
        allow_underconnected: args.allow_underconnected,
        targets,
        preserver_kind: solved.preserver_kind,
        preserver_edge_ids: solved.preserver,
        intermediate: solved.intermediate,
        timing: Timing {
            total_ms,
            phases: solved
                .phases
                .iter()
                .map(|ph| PhaseTime {
                    phase: ph.phase,
                    prep_ms: ph.prep_ms,
                    main_loop_ms: ph.main_loop_ms,
                })
                .collect(),
        },
    })
}

fn engine_error(err: EngineError, p: usize, vertex_disjoint: bool) -> anyhow::Error {
    match err {
        EngineError::NotOutconnected { target, .. } => Infeasible {
            vertex: target,
            p,
            vertex_disjoint,
        }
        .into(),
        other => other.into(),
    }
}

fn transform_error(err: TransformError, p: usize, vertex_disjoint: bool) -> anyhow::Error {
    match err {
        TransformError::Engine(e) => engine_error(e, p, vertex_disjoint),
        other => other.into(),
    }
}

fn snapshots(
    snaps: &[PhaseSnapshot],
    s: VertexId,
    n: usize,
    aug: Option<&AugmentedGraph>,
) -> Vec<PhaseRecord> {
    let map = |set: &EdgeSet| match aug {
        Some(aug) => strip_dummies(set, aug).sorted(),
        None => set.sorted(),
    };
    snaps
        .iter()
        .enumerate()
        .map(|(i, snap)| PhaseRecord {
            phase: i + 1,
            preserver_edge_ids: map(&snap.preserver),
            solutions: (0..n)
                .filter(|&t| t != s)
                .filter_map(|t| {
                    snap.solutions[t].as_ref().map(|sol| PhaseSolution {
                        t: t + 1,
                        edge_ids: map(sol),
                    })
                })
                .collect(),
        })
        .collect()
}

fn solve_engine(g: &Digraph, s: VertexId, args: SolveArgs, exec: Execution) -> Result<Solved> {
    let options = EngineOptions {
        keep_intermediate: args.keep_intermediate,
        execution: exec,
    };
    let n = g.vertex_count();
    if args.vertex_disjoint {
        let vd = transforms::solve_vertex_disjoint(g, s, args.p, options)
            .map_err(|e| transform_error(e, args.p, true))?;
        if args.keep_intermediate {
            eprintln!("note: intermediate phases are not reported in vertex-disjoint mode");
        }
        return Ok(Solved {
            per_target: zip_targets(&vd.sigma, vd.solutions),
            preserver_kind: PreserverKind::None,
            preserver: None,
            phases: vd.engine.timings,
            intermediate: None,
        });
    }
    if args.allow_underconnected {
        let gen = transforms::solve_underconnected(g, s, args.p, options)
            .map_err(|e| transform_error(e, args.p, false))?;
        let intermediate = args.keep_intermediate.then(|| {
            let snaps = gen.engine.intermediate.as_deref().unwrap_or(&[]);
            snapshots(snaps, s, n, Some(&gen.augmented))
        });
        return Ok(Solved {
            per_target: zip_targets(&gen.sigma, gen.solutions),
            preserver_kind: PreserverKind::Optimal,
            preserver: Some(gen.preserver.sorted()),
            phases: gen.engine.timings,
            intermediate,
        });
    }
    let out = engine::run(g, s, args.p, options).map_err(|e| engine_error(e, args.p, false))?;
    let intermediate = out
        .intermediate
        .as_deref()
        .map(|snaps| snapshots(snaps, s, n, None));
    let sigma = vec![args.p; n];
    Ok(Solved {
        per_target: zip_targets(&sigma, out.solutions),
        preserver_kind: PreserverKind::Optimal,
        preserver: Some(out.preserver_edges.clone()),
        phases: out.timings,
        intermediate,
    })
}

fn zip_targets(sigma: &[usize], solutions: Vec<Option<EdgeSet>>) -> Vec<Option<(usize, EdgeSet)>> {
    solutions
        .into_iter()
        .zip(sigma)
        .map(|(sol, &k)| sol.map(|sol| (k, sol)))
        .collect()
}

fn solve_baseline(g: &Digraph, s: VertexId, args: SolveArgs, exec: Execution) -> Result<Solved> {
    g.check_vertex(s)?;
    if args.keep_intermediate {
        eprintln!("note: --keep-intermediate has no effect in ssp-baseline mode");
    }
    let targets: Vec<VertexId> = (0..g.vertex_count()).filter(|&t| t != s).collect();
    let mut per_target = vec![None; g.vertex_count()];
    if args.vertex_disjoint {
        let split = split_vertices(g);
        let results = par::map(exec, &targets, |&t| {
            let levels = ssp_fast(&split.graph, split.v_out(s), split.v_in(t), args.p);
            let sigma = levels.levels.len();
            let sol = levels.levels.last().map(|l| transforms::map_solution_back(&l.edges, &split));
            (sigma, sol.unwrap_or_default())
        });
        for (&t, r) in targets.iter().zip(results) {
            per_target[t] = Some(r);
        }
        return Ok(Solved {
            per_target,
            preserver_kind: PreserverKind::None,
            preserver: None,
            phases: Vec::new(),
            intermediate: None,
        });
    }
    let results = par::map(exec, &targets, |&t| {
        let levels = ssp_fast(g, s, t, args.p);
        let sigma = levels.levels.len();
        (sigma, levels.levels.last().map(|l| l.edges.clone()).unwrap_or_default())
    });
    let mut union = EdgeSet::new();
    for (&t, r) in targets.iter().zip(results) {
        union.extend(r.1.iter());
        per_target[t] = Some(r);
    }
    Ok(Solved {
        per_target,
        preserver_kind: PreserverKind::UnionCover,
        preserver: Some(union.sorted()),
        phases: Vec::new(),
        intermediate: None,
    })
}
