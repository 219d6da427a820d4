//! Reductions onto the `p`-edge-outconnected case.
//!
//! * Dummy augmentation adds `p` expensive hub vertices so that every vertex
//!   has `p` edge-disjoint paths from the source. Solutions that avoid the
//!   hubs are exactly the optimal `sigma(t) = min(p, lambda(t))`-path
//!   solutions of the original graph.
//! * Vertex splitting turns vertex-disjointness into edge-disjointness with
//!   one zero-cost gadget edge per vertex.

use thiserror::Error;

use crate::engine::{self, EngineError, EngineOptions, EngineOutput};
use crate::graph::{Cost, Digraph, EdgeId, EdgeSet, GraphError, VertexId};
use crate::oracle::FlowSolution;
use crate::verify::{self, DecomposeError, DecomposeMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("p={p} must be smaller than the vertex count {n}")]
    PTooLarge { p: usize, n: usize },
    #[error("p must be at least 1")]
    InvalidP,
    #[error("dummy edge costs overflow 64-bit arithmetic")]
    CostOverflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `G'`: the original graph plus `p` dummy vertices joined at cost `M`.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub graph: Digraph,
    pub source: VertexId,
    pub original_vertices: usize,
    pub dummies: Vec<VertexId>,
    /// `M = c(E(G)) + 1`.
    pub big_cost: Cost,
    /// Original edge id for each edge of `graph`, `None` for dummy edges.
    pub origin: Vec<Option<EdgeId>>,
}

impl AugmentedGraph {
    pub fn is_dummy(&self, v: VertexId) -> bool {
        v >= self.original_vertices
    }
}

/// Adds dummies `v_1..v_p` with all edges among them, `s -> v_j`, and
/// `v_j -> v` for every original `v != s`, all of cost `M`. Original edges
/// keep their ids.
pub fn augment_with_dummies(g: &Digraph, s: VertexId, p: usize) -> Result<AugmentedGraph, TransformError> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    if p == 0 {
        return Err(TransformError::InvalidP);
    }
    if p >= n {
        return Err(TransformError::PTooLarge { p, n });
    }
    let big = g.total_cost().checked_add(1).ok_or(TransformError::CostOverflow)?;
    // p paths through dummies cost up to 2pM
    big.checked_mul(2 * p as Cost + 2).ok_or(TransformError::CostOverflow)?;

    let dummies: Vec<VertexId> = (n..n + p).collect();
    let mut edges: Vec<(VertexId, VertexId, Cost)> = g.edges().iter().map(|e| (e.tail, e.head, e.cost)).collect();
    let mut origin: Vec<Option<EdgeId>> = (0..g.edge_count()).map(Some).collect();
    let mut push = |u, v| {
        edges.push((u, v, big));
        origin.push(None);
    };
    for &a in &dummies {
        for &b in &dummies {
            if a != b {
                push(a, b);
            }
        }
    }
    for &d in &dummies {
        push(s, d);
    }
    for &d in &dummies {
        for v in (0..n).filter(|&v| v != s) {
            push(d, v);
        }
    }
    let graph = Digraph::new(n + p, edges).map_err(|e| match e {
        GraphError::CostOverflow => TransformError::CostOverflow,
        other => TransformError::Graph(other),
    })?;
    Ok(AugmentedGraph {
        graph,
        source: s,
        original_vertices: n,
        dummies,
        big_cost: big,
        origin,
    })
}

/// `sigma(t)` and `S_sigma^t` mapped to original edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSolution {
    pub sigma: usize,
    pub solution: EdgeSet,
}

/// Largest level whose cost is below `M`, and its edge set without dummies.
pub fn extract_sigma(levels: &FlowSolution, aug: &AugmentedGraph) -> SigmaSolution {
    let sigma = levels
        .levels
        .iter()
        .rposition(|l| l.cost < aug.big_cost)
        .map_or(0, |k| k + 1);
    let solution = match levels.level(sigma) {
        Some(l) => strip_dummies(&l.edges, aug),
        None => EdgeSet::new(),
    };
    SigmaSolution { sigma, solution }
}

/// Drops every edge incident to a dummy and maps the rest to original ids.
pub fn strip_dummies(edges: &EdgeSet, aug: &AugmentedGraph) -> EdgeSet {
    edges.iter().filter_map(|e| aug.origin[e]).collect()
}

/// Vertex-split graph: `v^- = 2v`, `v^+ = 2v + 1`.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub graph: Digraph,
    pub original_vertices: usize,
    /// Original edge id per split edge; `None` for gadget edges.
    pub origin: Vec<Option<EdgeId>>,
}

impl SplitGraph {
    #[inline]
    pub fn v_in(&self, v: VertexId) -> VertexId {
        2 * v
    }

    #[inline]
    pub fn v_out(&self, v: VertexId) -> VertexId {
        2 * v + 1
    }
}

/// Gadget edges `(v^-, v^+)` of cost 0 take ids `0..n`; each original edge
/// `(u, v)` becomes `(u^+, v^-)` with id `n + e`.
pub fn split_vertices(g: &Digraph) -> SplitGraph {
    let n = g.vertex_count();
    let gadgets = (0..n).map(|v| (2 * v, 2 * v + 1, 0));
    let arcs = g.edges().iter().map(|e| (2 * e.tail + 1, 2 * e.head, e.cost));
    let graph = Digraph::new(2 * n, gadgets.chain(arcs)).expect("split of a valid graph is valid");
    let origin = std::iter::repeat_n(None, n)
        .chain((0..g.edge_count()).map(Some))
        .collect();
    SplitGraph {
        graph,
        original_vertices: n,
        origin,
    }
}

/// Drops gadget edges and maps split edges to original ids.
pub fn map_solution_back(edges: &EdgeSet, sg: &SplitGraph) -> EdgeSet {
    edges.iter().filter_map(|e| sg.origin[e]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BottleneckReport {
    pub total_cost: Cost,
    /// Costliest path in the verifier's deterministic decomposition.
    pub max_path_cost: Cost,
}

/// Total and per-path maximum cost of a `p`-path solution. The maximum is
/// at most `p` times the optimal bottleneck value.
pub fn bottleneck_report(
    g: &Digraph,
    solution: &EdgeSet,
    s: VertexId,
    t: VertexId,
    p: usize,
) -> Result<BottleneckReport, DecomposeError> {
    let dec = verify::decompose(g, solution, s, t, p, DecomposeMode::Strict)?;
    Ok(BottleneckReport {
        total_cost: solution.cost(g),
        max_path_cost: dec.paths.iter().map(|p| p.cost).max().unwrap_or(0),
    })
}

/// Engine output for a graph that need not be `p`-edge-outconnected.
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    /// `sigma(t)` per original vertex; 0 at the source.
    pub sigma: Vec<usize>,
    /// `S_sigma(t)^t` in original edge ids; `None` at the source.
    pub solutions: Vec<Option<EdgeSet>>,
    /// Preserver with every dummy edge removed.
    pub preserver: EdgeSet,
    pub augmented: AugmentedGraph,
    pub engine: EngineOutput,
}

/// Dummy augmentation, the engine on `G'`, sigma extraction and stripping.
pub fn solve_underconnected(
    g: &Digraph,
    s: VertexId,
    p: usize,
    options: EngineOptions,
) -> Result<GeneralSolution, TransformError> {
    let aug = augment_with_dummies(g, s, p)?;
    let engine = engine::run(
        &aug.graph,
        s,
        p,
        EngineOptions {
            keep_intermediate: true,
            ..options
        },
    )?;
    let n = g.vertex_count();
    let mut sigma = vec![0; n];
    let mut solutions = vec![None; n];
    for t in (0..n).filter(|&t| t != s) {
        let levels = engine.flow_levels(&aug.graph, t).expect("intermediate levels kept");
        let sig = extract_sigma(&levels, &aug);
        sigma[t] = sig.sigma;
        solutions[t] = Some(sig.solution);
    }
    let preserver = strip_dummies(&engine.preserver, &aug);
    Ok(GeneralSolution {
        sigma,
        solutions,
        preserver,
        augmented: aug,
        engine,
    })
}

/// Vertex-disjoint solutions: sigma and per-target edge sets in original
/// ids. The preserver on the split graph has no meaning in `g`.
#[derive(Debug, Clone)]
pub struct VertexDisjointSolution {
    pub sigma: Vec<usize>,
    pub solutions: Vec<Option<EdgeSet>>,
    pub split: SplitGraph,
    pub augmented: AugmentedGraph,
    pub engine: EngineOutput,
}

/// Splits vertices, augments with dummies, runs from `s^+`, and reads each
/// original target `t` at `t^-`.
pub fn solve_vertex_disjoint(
    g: &Digraph,
    s: VertexId,
    p: usize,
    options: EngineOptions,
) -> Result<VertexDisjointSolution, TransformError> {
    g.check_vertex(s)?;
    let split = split_vertices(g);
    let src = split.v_out(s);
    let aug = augment_with_dummies(&split.graph, src, p)?;
    let engine = engine::run(
        &aug.graph,
        src,
        p,
        EngineOptions {
            keep_intermediate: true,
            ..options
        },
    )?;
    let n = g.vertex_count();
    let mut sigma = vec![0; n];
    let mut solutions = vec![None; n];
    for t in (0..n).filter(|&t| t != s) {
        let levels = engine
            .flow_levels(&aug.graph, split.v_in(t))
            .expect("intermediate levels kept");
        let sig = extract_sigma(&levels, &aug);
        sigma[t] = sig.sigma;
        solutions[t] = Some(map_solution_back(&sig.solution, &split));
    }
    Ok(VertexDisjointSolution {
        sigma,
        solutions,
        split,
        augmented: aug,
        engine,
    })
}
