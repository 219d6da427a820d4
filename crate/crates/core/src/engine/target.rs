//! Per-target preparation for one phase: the sparse residual subgraph, its
//! re-weighting potentials, and the reverse shortest-path tree.
//!
//! Everything here reads only the immutable previous-phase state, so the
//! targets of a phase can be prepared concurrently.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{Cost, Digraph, EdgeSet, OrientedEdge, VertexId};
use crate::lex::LexCost;

use super::preserver::Preserver;
use super::queue::PathKey;
use super::EngineError;

/// Oriented edge list of the residual subgraph `H^t` used for one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSubgraph {
    pub target: VertexId,
    pub edges: Vec<OrientedEdge>,
}

/// Reverse shortest-path tree towards `target`. `dist` holds true
/// (un-reweighted) lexicographic lengths of the tree paths `v -> target`,
/// `forward_steps` the number of forward edges on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetTree {
    pub target: VertexId,
    pub member: Vec<bool>,
    pub parent_edge: Vec<Option<OrientedEdge>>,
    pub dist: Vec<LexCost>,
    pub forward_steps: Vec<u32>,
}

impl TargetTree {
    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.member[v]
    }

    /// Full key of the tree path from `v`.
    #[inline]
    pub fn key(&self, v: VertexId) -> PathKey {
        PathKey::new(self.dist[v], self.forward_steps[v])
    }

    /// Oriented tree path from `from` to the target.
    pub fn path_from(&self, g: &Digraph, from: VertexId) -> Vec<OrientedEdge> {
        let mut path = Vec::new();
        let mut v = from;
        while v != self.target {
            let oe = self.parent_edge[v].expect("tree member has a parent edge");
            path.push(oe);
            v = oe.head(g);
        }
        path
    }
}

/// Preserver edges with the target's solution reversed, plus the edges
/// entering the target that are neither in the solution nor the preserver.
pub fn build_target_subgraph(
    g: &Digraph,
    preserver: &Preserver,
    solution: &EdgeSet,
    t: VertexId,
) -> TargetSubgraph {
    let mut edges = Vec::with_capacity(preserver.len() + g.in_edges(t).len());
    for &e in preserver.edges() {
        edges.push(OrientedEdge {
            edge: e,
            forward: !solution.contains(e),
        });
    }
    for &e in g.in_edges(t) {
        if !solution.contains(e) && !preserver.contains(e) {
            edges.push(OrientedEdge::forward(e));
        }
    }
    TargetSubgraph { target: t, edges }
}

/// Compressed adjacency over an oriented edge list, keyed by tail or head.
struct Adjacency {
    start: Vec<usize>,
    items: Vec<OrientedEdge>,
}

impl Adjacency {
    fn build(g: &Digraph, edges: &[OrientedEdge], key: impl Fn(&OrientedEdge) -> VertexId) -> Self {
        let n = g.vertex_count();
        let mut start = vec![0usize; n + 1];
        for oe in edges {
            start[key(oe) + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut items = vec![OrientedEdge::forward(0); edges.len()];
        for oe in edges {
            let k = key(oe);
            items[fill[k]] = *oe;
            fill[k] += 1;
        }
        Self { start, items }
    }

    #[inline]
    fn of(&self, v: VertexId) -> &[OrientedEdge] {
        &self.items[self.start[v]..self.start[v + 1]]
    }
}

#[inline]
fn reduced_cost(g: &Digraph, oe: OrientedEdge, pot: &[Cost], target: VertexId) -> Result<Cost, EngineError> {
    let rc = oe.cost(g) + pot[oe.tail(g)] - pot[oe.head(g)];
    if rc < 0 {
        return Err(EngineError::NegativeReducedCost {
            target,
            edge: oe.edge,
            forward: oe.forward,
            reduced: rc,
        });
    }
    Ok(rc)
}

/// New potentials for target `t`: distances from `s` in the preserver with
/// `older_solution` reversed, re-weighted by `pot_prev`, added to `pot_prev`.
/// Vertices unreachable there get the largest finite distance plus one.
pub fn update_potentials(
    g: &Digraph,
    preserver: &Preserver,
    older_solution: &EdgeSet,
    pot_prev: &[Cost],
    s: VertexId,
    t: VertexId,
) -> Result<Vec<Cost>, EngineError> {
    let n = g.vertex_count();
    let edges: Vec<OrientedEdge> = preserver
        .edges()
        .iter()
        .map(|&e| OrientedEdge {
            edge: e,
            forward: !older_solution.contains(e),
        })
        .collect();
    for &oe in &edges {
        reduced_cost(g, oe, pot_prev, t)?;
    }
    let out = Adjacency::build(g, &edges, |oe| oe.tail(g));

    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::with_capacity(n);
    dist[s] = Some(0);
    heap.push(Reverse((0, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &oe in out.of(u) {
            let v = oe.head(g);
            let nd = d + reduced_cost(g, oe, pot_prev, t)?;
            if !done[v] && dist[v].is_none_or(|dv| nd < dv) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    let sentinel = dist.iter().flatten().copied().max().unwrap_or(0) + 1;
    Ok(pot_prev
        .iter()
        .zip(&dist)
        .map(|(&h0, d)| h0 + d.unwrap_or(sentinel))
        .collect())
}

/// Lexicographic Dijkstra towards `sub.target` over the re-weighted
/// subgraph. Keys are (reduced cost, eta, forward steps); equal keys pop in
/// vertex order.
pub fn reverse_spt(
    g: &Digraph,
    sub: &TargetSubgraph,
    pot: &[Cost],
    preserver: &Preserver,
) -> Result<TargetTree, EngineError> {
    let n = g.vertex_count();
    let t = sub.target;
    for &oe in &sub.edges {
        reduced_cost(g, oe, pot, t)?;
    }
    let incoming = Adjacency::build(g, &sub.edges, |oe| oe.head(g));

    let mut key = vec![PathKey::TOP; n];
    let mut parent_edge: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::with_capacity(n);
    key[t] = PathKey::ZERO;
    heap.push(Reverse((PathKey::ZERO, t)));
    while let Some(Reverse((k, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &oe in incoming.of(v) {
            let u = oe.tail(g);
            let step = PathKey::new(
                LexCost::new(
                    reduced_cost(g, oe, pot, t)?,
                    oe.lex_cost(g, preserver).hops().unwrap_or(0),
                ),
                oe.forward as u32,
            );
            let cand = k + step;
            if !done[u] && cand < key[u] {
                key[u] = cand;
                parent_edge[u] = Some(oe);
                heap.push(Reverse((cand, u)));
            }
        }
    }

    let mut dist = vec![LexCost::Top; n];
    let mut forward_steps = vec![0; n];
    for v in 0..n {
        forward_steps[v] = key[v].forward_steps;
        if let LexCost::Finite { cost, hops } = key[v].lex {
            let true_cost = cost - pot[v] + pot[t];
            if true_cost < 0 {
                return Err(EngineError::NegativeTreeDistance {
                    target: t,
                    vertex: v,
                    cost: true_cost,
                });
            }
            dist[v] = LexCost::new(true_cost, hops);
        }
    }
    Ok(TargetTree {
        target: t,
        member: done,
        parent_edge,
        dist,
        forward_steps,
    })
}
