//! Phase-based construction of `p`-multipath preservers.
//!
//! Phase 1 takes a shortest-path tree from the source. Every later phase `i`
//! first prepares, for each target `t`, a reverse shortest-path tree in a
//! sparse residual subgraph (the preserver with `t`'s current solution
//! reversed, plus the edges entering `t`), then runs one Dijkstra-like loop
//! over all targets at once: the shortest augmenting path to `t` is the
//! path of some earlier-extracted hub `q` extended by `q`'s tree path in
//! `t`'s tree. Each extraction adds exactly one edge entering the extracted
//! vertex to the preserver and augments that vertex's solution.
//!
//! Path lengths are compared as `(cost, eta)` pairs, where `eta` counts
//! edges outside the previous preserver. That tie-break is what keeps the
//! hub composition valid; plain-cost ties are not enough. Remaining ties
//! go to fewer forward steps, so that an augmenting path cancels a
//! zero-cost solution edge instead of closing a cycle with it.

mod preserver;
mod queue;
mod target;

use std::time::Instant;

use thiserror::Error;

use crate::graph::{path_lex_cost, Cost, Digraph, EdgeId, EdgeSet, GraphError, OrientedEdge, VertexId};
use crate::oracle::{apply_augmenting_path, FlowLevel, FlowSolution};
use crate::par::{self, Execution};

pub use preserver::Preserver;
pub use queue::{ArrayQueue, PathKey};
pub use target::{build_target_subgraph, reverse_spt, update_potentials, TargetSubgraph, TargetTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("p must be at least 1")]
    InvalidP,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex {0} is unreachable from the source")]
    UnreachableVertex(VertexId),
    #[error("vertex {target} has fewer than {phase} edge-disjoint paths from the source")]
    NotOutconnected { phase: usize, target: VertexId },
    #[error("negative reduced cost {reduced} on edge {edge} (forward={forward}) for target {target}")]
    NegativeReducedCost {
        target: VertexId,
        edge: EdgeId,
        forward: bool,
        reduced: Cost,
    },
    #[error("negative tree distance {cost} from vertex {vertex} to target {target}")]
    NegativeTreeDistance {
        target: VertexId,
        vertex: VertexId,
        cost: Cost,
    },
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineOptions {
    /// Keep every `H_i` and every `S_i^t`, not just the final phase.
    pub keep_intermediate: bool,
    /// How per-target preparation is scheduled inside a phase.
    pub execution: Execution,
}

/// Per-target state carried between phases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetState {
    /// `S_i^t` after phase `i`.
    pub solution: EdgeSet,
    /// `S_{i-1}^t` (empty after phase 1).
    pub older_solution: EdgeSet,
    /// Potentials valid for the residual network of `older_solution`.
    pub potential: Vec<Cost>,
}

#[derive(Debug, Clone)]
pub struct PhaseState {
    pub phase: usize,
    pub source: VertexId,
    pub preserver: Preserver,
    /// Indexed by vertex; `None` at the source.
    pub targets: Vec<Option<TargetState>>,
}

impl PhaseState {
    pub fn solution(&self, t: VertexId) -> Option<&EdgeSet> {
        self.targets[t].as_ref().map(|ts| &ts.solution)
    }

    fn solutions(&self) -> Vec<Option<EdgeSet>> {
        self.targets
            .iter()
            .map(|ts| ts.as_ref().map(|ts| ts.solution.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTiming {
    pub phase: usize,
    pub prep_ms: f64,
    pub main_loop_ms: f64,
}

/// Counts of runtime checks that ran (and passed).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub trees_built: usize,
    pub reduced_cost_checks: usize,
    pub tree_distance_checks: usize,
    pub extractions: usize,
}

/// Snapshot after one phase.
#[derive(Debug, Clone)]
pub struct PhaseSnapshot {
    pub preserver: EdgeSet,
    pub solutions: Vec<Option<EdgeSet>>,
}

#[derive(Debug, Clone)]
pub struct EngineOutput {
    pub source: VertexId,
    pub p: usize,
    /// `H_p`, in insertion order.
    pub preserver_edges: Vec<EdgeId>,
    pub preserver: EdgeSet,
    /// `S_p^t` indexed by vertex; `None` at the source.
    pub solutions: Vec<Option<EdgeSet>>,
    /// Phases `1..=p` when `keep_intermediate` was set.
    pub intermediate: Option<Vec<PhaseSnapshot>>,
    pub timings: Vec<PhaseTiming>,
    pub stats: EngineStats,
}

impl EngineOutput {
    pub fn solution(&self, t: VertexId) -> Option<&EdgeSet> {
        self.solutions.get(t).and_then(|s| s.as_ref())
    }

    pub fn solution_cost(&self, g: &Digraph, t: VertexId) -> Option<Cost> {
        self.solution(t).map(|s| s.cost(g))
    }

    /// Levels `1..=p` of target `t` as a [`FlowSolution`]; requires
    /// `keep_intermediate`.
    pub fn flow_levels(&self, g: &Digraph, t: VertexId) -> Option<FlowSolution> {
        let snaps = self.intermediate.as_ref()?;
        let levels = snaps
            .iter()
            .map(|snap| {
                let edges = snap.solutions[t].clone()?;
                let cost = edges.cost(g);
                Some(FlowLevel { edges, cost })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(FlowSolution {
            target: t,
            requested: self.p,
            levels,
        })
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Phase 1: a shortest-path tree from `s`; each `S_1^t` is the tree path.
pub fn init_phase1(g: &Digraph, s: VertexId) -> Result<PhaseState, EngineError> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = std::collections::BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(std::cmp::Reverse((0, s)));
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        order.push(u);
        for &e in g.out_edges(u) {
            let r = g.edge(e);
            let nd = d + r.cost;
            if !done[r.head] && dist[r.head].is_none_or(|dv| nd < dv) {
                dist[r.head] = Some(nd);
                parent[r.head] = Some(e);
                heap.push(std::cmp::Reverse((nd, r.head)));
            }
        }
    }
    if let Some(t) = (0..n).find(|&v| !done[v]) {
        return Err(EngineError::UnreachableVertex(t));
    }

    let mut preserver = Preserver::new(g);
    let mut paths: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    // settle order guarantees the parent's path is already built
    for &v in &order {
        if let Some(e) = parent[v] {
            preserver.insert(g, e);
            let mut path = paths[g.edge(e).tail].clone();
            path.push(e);
            paths[v] = path;
        }
    }
    let targets = paths
        .into_iter()
        .enumerate()
        .map(|(v, path)| {
            (v != s).then(|| TargetState {
                solution: path.into_iter().collect(),
                older_solution: EdgeSet::new(),
                potential: vec![0; n],
            })
        })
        .collect();
    Ok(PhaseState {
        phase: 1,
        source: s,
        preserver,
        targets,
    })
}

struct Prepared {
    potential: Vec<Cost>,
    tree: TargetTree,
    reduced_checks: usize,
}

fn prepare_target(g: &Digraph, state: &PhaseState, t: VertexId) -> Result<Prepared, EngineError> {
    let ts = state.targets[t].as_ref().expect("target state");
    let potential = update_potentials(
        g,
        &state.preserver,
        &ts.older_solution,
        &ts.potential,
        state.source,
        t,
    )?;
    let sub = build_target_subgraph(g, &state.preserver, &ts.solution, t);
    let tree = reverse_spt(g, &sub, &potential, &state.preserver)?;
    Ok(Prepared {
        potential,
        tree,
        reduced_checks: state.preserver.len() + sub.edges.len(),
    })
}

fn invariant(msg: String) -> EngineError {
    EngineError::InternalInvariant(msg)
}

/// One phase: per-target preparation, then the shared extraction loop.
pub fn run_phase(
    g: &Digraph,
    state: &PhaseState,
    execution: Execution,
    stats: &mut EngineStats,
) -> Result<(PhaseState, PhaseTiming), EngineError> {
    let n = g.vertex_count();
    let s = state.source;
    let phase = state.phase + 1;

    let prep_start = Instant::now();
    let targets: Vec<VertexId> = (0..n).filter(|&v| v != s).collect();
    let prepared = par::map(execution, &targets, |&t| prepare_target(g, state, t));
    let mut trees: Vec<Option<TargetTree>> = vec![None; n];
    let mut potentials: Vec<Option<Vec<Cost>>> = vec![None; n];
    for (&t, prep) in targets.iter().zip(prepared) {
        let prep = prep?;
        stats.trees_built += 1;
        stats.reduced_cost_checks += prep.reduced_checks;
        stats.tree_distance_checks += prep.tree.member.iter().filter(|&&m| m).count();
        trees[t] = Some(prep.tree);
        potentials[t] = Some(prep.potential);
    }
    let prep_ms = ms_since(prep_start);

    let loop_start = Instant::now();
    let mut preserver = state.preserver.clone();
    let mut new_solutions: Vec<Option<EdgeSet>> = vec![None; n];
    let mut queue = ArrayQueue::with_top(n, PathKey::TOP);
    let mut hub: Vec<Option<VertexId>> = vec![None; n];
    let mut paths: Vec<Vec<OrientedEdge>> = vec![Vec::new(); n];
    queue.decrease(s, PathKey::ZERO);
    let mut last = PathKey::ZERO;

    while let Some((q, dq)) = queue.pop_min() {
        stats.extractions += 1;
        if dq.is_top() {
            return Err(EngineError::NotOutconnected { phase, target: q });
        }
        if dq < last {
            return Err(invariant(format!("extraction order decreased at {q}: {dq} after {last}")));
        }
        last = dq;

        if q != s {
            let via = hub[q].expect("finite key has a hub");
            let tree = trees[q].as_ref().expect("tree for target");
            let mut path = paths[via].clone();
            path.extend(tree.path_from(g, via));

            let measured = PathKey::new(
                path_lex_cost(g, &path, &state.preserver),
                path.iter().filter(|oe| oe.forward).count() as u32,
            );
            if measured != dq {
                return Err(invariant(format!("path to {q} measures {measured}, key is {dq}")));
            }
            let last_edge = *path
                .last()
                .ok_or_else(|| invariant(format!("empty path to {q}")))?;
            if !last_edge.forward || g.edge(last_edge.edge).head != q {
                return Err(invariant(format!("path to {q} does not end with an edge entering it")));
            }
            if !preserver.insert(g, last_edge.edge) {
                return Err(invariant(format!(
                    "edge {} entering {q} is already in the preserver",
                    last_edge.edge
                )));
            }
            let current = &state.targets[q].as_ref().expect("target state").solution;
            let next = apply_augmenting_path(current, &path)
                .map_err(|e| invariant(format!("augmenting {q}: {e}")))?;
            new_solutions[q] = Some(next);
            paths[q] = path;
        }

        for t in 0..n {
            if !queue.is_queued(t) {
                continue;
            }
            let tree = trees[t].as_ref().expect("tree for target");
            if tree.contains(q) {
                let cand = dq + tree.key(q);
                if cand < queue.key(t) {
                    queue.decrease(t, cand);
                    hub[t] = Some(q);
                }
            }
        }
    }

    let mut next_targets = Vec::with_capacity(n);
    for (v, ts) in state.targets.iter().enumerate() {
        next_targets.push(match ts {
            None => None,
            Some(ts) => {
                let solution = new_solutions[v].take().expect("every target extracted");
                if preserver.in_degree(v) != phase {
                    return Err(invariant(format!(
                        "vertex {v} has preserver in-degree {} after phase {phase}",
                        preserver.in_degree(v)
                    )));
                }
                if let Some(e) = solution.iter().find(|&e| !preserver.contains(e)) {
                    return Err(invariant(format!("solution of {v} uses edge {e} outside the preserver")));
                }
                Some(TargetState {
                    solution,
                    older_solution: ts.solution.clone(),
                    potential: potentials[v].take().expect("potential"),
                })
            }
        });
    }
    let timing = PhaseTiming {
        phase,
        prep_ms,
        main_loop_ms: ms_since(loop_start),
    };
    Ok((
        PhaseState {
            phase,
            source: s,
            preserver,
            targets: next_targets,
        },
        timing,
    ))
}

/// Runs all `p` phases. `g` must be `p`-edge-outconnected from `s`.
pub fn run(g: &Digraph, s: VertexId, p: usize, options: EngineOptions) -> Result<EngineOutput, EngineError> {
    if p == 0 {
        return Err(EngineError::InvalidP);
    }
    let mut stats = EngineStats::default();
    let start = Instant::now();
    let mut state = init_phase1(g, s)?;
    let mut timings = vec![PhaseTiming {
        phase: 1,
        prep_ms: 0.0,
        main_loop_ms: ms_since(start),
    }];
    let snapshot = |st: &PhaseState| PhaseSnapshot {
        preserver: st.preserver.to_edge_set(),
        solutions: st.solutions(),
    };
    let mut intermediate = options.keep_intermediate.then(|| vec![snapshot(&state)]);
    for _ in 2..=p {
        let (next, timing) = run_phase(g, &state, options.execution, &mut stats)?;
        state = next;
        timings.push(timing);
        if let Some(snaps) = intermediate.as_mut() {
            snaps.push(snapshot(&state));
        }
    }
    Ok(EngineOutput {
        source: s,
        p,
        preserver_edges: state.preserver.edges().to_vec(),
        preserver: state.preserver.to_edge_set(),
        solutions: state.solutions(),
        intermediate,
        timings,
        stats,
    })
}
