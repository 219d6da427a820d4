//! Reference solvers used as ground truth for the engine.
//!
//! These work one target at a time and never look at preservers or the
//! lexicographic tie-break: shortest augmenting paths are chosen by plain
//! cost. Totals are tie-independent, edge sets are not.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{Cost, Digraph, EdgeId, EdgeSet, OrientedEdge, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("augmenting path step {step} ({edge}, forward={forward}) violates the residual precondition")]
    InvalidAugmentingPath {
        step: usize,
        edge: EdgeId,
        forward: bool,
    },
    #[error("instance too large for enumeration: n={n}, m={m} (limits n<={max_n}, m<={max_m})")]
    InstanceTooLarge {
        n: usize,
        m: usize,
        max_n: usize,
        max_m: usize,
    },
}

/// One SSP level: the edges of `i` edge-disjoint paths and their total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowLevel {
    pub edges: EdgeSet,
    pub cost: Cost,
}

/// Levels `1..=k` of successive shortest paths towards one target.
/// `levels[i - 1]` holds `i` paths. `k < requested` when the target ran out
/// of augmenting paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    pub target: VertexId,
    pub requested: usize,
    pub levels: Vec<FlowLevel>,
}

impl FlowSolution {
    pub fn reached_requested(&self) -> bool {
        self.levels.len() == self.requested
    }

    /// Level with `i` paths, 1-based.
    pub fn level(&self, i: usize) -> Option<&FlowLevel> {
        i.checked_sub(1).and_then(|k| self.levels.get(k))
    }

    pub fn costs(&self) -> Vec<Cost> {
        self.levels.iter().map(|l| l.cost).collect()
    }
}

/// Next solution set after augmenting along `path`: reversed steps cancel
/// their edge, forward steps add theirs. Every reversed edge must be in
/// `prev` and no forward edge may be, each edge used at most once.
pub fn apply_augmenting_path(prev: &EdgeSet, path: &[OrientedEdge]) -> Result<EdgeSet, OracleError> {
    let mut next = prev.clone();
    for (step, oe) in path.iter().enumerate() {
        let ok = if oe.forward {
            !prev.contains(oe.edge) && next.insert(oe.edge)
        } else {
            prev.contains(oe.edge) && next.remove(oe.edge)
        };
        if !ok {
            return Err(OracleError::InvalidAugmentingPath {
                step,
                edge: oe.edge,
                forward: oe.forward,
            });
        }
    }
    Ok(next)
}

/// Unit-capacity residual network over a flow given as an edge indicator.
struct Residual<'g> {
    g: &'g Digraph,
    used: Vec<bool>,
}

impl<'g> Residual<'g> {
    fn new(g: &'g Digraph) -> Self {
        Self {
            g,
            used: vec![false; g.edge_count()],
        }
    }

    /// Calls `f(step, head)` for every residual edge leaving `u`.
    #[inline]
    fn for_each_out(&self, u: VertexId, mut f: impl FnMut(OrientedEdge, VertexId)) {
        for &e in self.g.out_edges(u) {
            if !self.used[e] {
                f(OrientedEdge::forward(e), self.g.edge(e).head);
            }
        }
        for &e in self.g.in_edges(u) {
            if self.used[e] {
                f(OrientedEdge::backward(e), self.g.edge(e).tail);
            }
        }
    }

    fn augment(&mut self, path: &[OrientedEdge]) {
        for oe in path {
            self.used[oe.edge] = oe.forward;
        }
    }
}

fn trace_path(g: &Digraph, pred: &[Option<OrientedEdge>], s: VertexId, t: VertexId) -> Vec<OrientedEdge> {
    let mut path = Vec::new();
    let mut v = t;
    while v != s {
        let oe = pred[v].expect("predecessor chain reaches the source");
        path.push(oe);
        v = oe.tail(g);
        assert!(path.len() <= g.vertex_count(), "predecessor cycle");
    }
    path.reverse();
    path
}

fn run_ssp<F>(g: &Digraph, s: VertexId, t: VertexId, p: usize, mut shortest: F) -> FlowSolution
where
    F: FnMut(&Residual) -> Option<Vec<OrientedEdge>>,
{
    let mut residual = Residual::new(g);
    let mut levels: Vec<FlowLevel> = Vec::with_capacity(p);
    let mut current = EdgeSet::new();
    let mut cost: Cost = 0;
    if s != t {
        for _ in 0..p {
            let Some(path) = shortest(&residual) else { break };
            current = apply_augmenting_path(&current, &path)
                .expect("residual shortest path satisfies the augmentation precondition");
            cost += path.iter().map(|oe| oe.cost(g)).sum::<Cost>();
            residual.augment(&path);
            levels.push(FlowLevel {
                edges: current.clone(),
                cost,
            });
        }
    }
    FlowSolution {
        target: t,
        requested: p,
        levels,
    }
}

/// Residual weight `c * scale + 1` for a forward step and its negation for
/// a reversed one. With `scale > m` a min-weight flow is a min-cost flow
/// that, among those, uses the fewest edges, so it never carries a
/// zero-cost cycle beside its paths. Plain-cost ties can produce such
/// cycles.
#[inline]
fn step_weight(g: &Digraph, oe: OrientedEdge, scale: i128) -> i128 {
    let w = g.edge(oe.edge).cost as i128 * scale + 1;
    if oe.forward {
        w
    } else {
        -w
    }
}

fn weight_scale(g: &Digraph) -> i128 {
    g.edge_count() as i128 + 1
}

/// Successive shortest paths with Bellman-Ford on the residual network.
/// `O(p n m)`; kept as an independent second implementation.
pub fn ssp_reference(g: &Digraph, s: VertexId, t: VertexId, p: usize) -> FlowSolution {
    let n = g.vertex_count();
    let scale = weight_scale(g);
    run_ssp(g, s, t, p, |res| {
        let mut dist: Vec<Option<i128>> = vec![None; n];
        let mut pred: Vec<Option<OrientedEdge>> = vec![None; n];
        dist[s] = Some(0);
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some(du) = dist[u] else { continue };
                res.for_each_out(u, |oe, v| {
                    let nd = du + step_weight(g, oe, scale);
                    if dist[v].is_none_or(|dv| nd < dv) {
                        dist[v] = Some(nd);
                        pred[v] = Some(oe);
                        changed = true;
                    }
                });
            }
            if !changed {
                break;
            }
        }
        dist[t].map(|_| trace_path(g, &pred, s, t))
    })
}

/// Successive shortest paths with Dijkstra on reduced weights. Potentials
/// are the accumulated previous-round distances, which keep every residual
/// reduced weight non-negative. `O(p (m + n log n))`.
pub fn ssp_fast(g: &Digraph, s: VertexId, t: VertexId, p: usize) -> FlowSolution {
    let n = g.vertex_count();
    let scale = weight_scale(g);
    let mut pot: Vec<i128> = vec![0; n];
    let mut dist: Vec<Option<i128>> = vec![None; n];
    let mut pred: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    run_ssp(g, s, t, p, |res| {
        dist.iter_mut().for_each(|d| *d = None);
        pred.iter_mut().for_each(|e| *e = None);
        let mut done = vec![false; n];
        dist[s] = Some(0);
        heap.clear();
        heap.push(Reverse((0, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            res.for_each_out(u, |oe, v| {
                let reduced = step_weight(g, oe, scale) + pot[u] - pot[v];
                assert!(reduced >= 0, "negative reduced weight {reduced} on {oe:?}");
                let nd = d + reduced;
                if !done[v] && dist[v].is_none_or(|dv| nd < dv) {
                    dist[v] = Some(nd);
                    pred[v] = Some(oe);
                    heap.push(Reverse((nd, v)));
                }
            });
        }
        dist[t]?;
        let max_dist = dist.iter().flatten().copied().max().unwrap_or(0);
        for v in 0..n {
            pot[v] += dist[v].unwrap_or(max_dist);
        }
        Some(trace_path(g, &pred, s, t))
    })
}

/// Plain single-source Dijkstra distances.
pub fn shortest_distances(g: &Digraph, s: VertexId) -> Vec<Option<Cost>> {
    let n = g.vertex_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u] != Some(d) {
            continue;
        }
        for &e in g.out_edges(u) {
            let r = g.edge(e);
            let nd = d + r.cost;
            if dist[r.head].is_none_or(|dv| nd < dv) {
                dist[r.head] = Some(nd);
                heap.push(Reverse((nd, r.head)));
            }
        }
    }
    dist
}

/// Size limits for [`brute_force_disjoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_vertices: 10,
            max_edges: 20,
        }
    }
}

/// Optima over every family of `p` pairwise edge-disjoint simple paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumeratedOptimum {
    /// Minimum total cost.
    pub total: Cost,
    /// Minimum, over families, of the costliest path in the family.
    pub bottleneck: Cost,
}

/// Exhaustive enumeration of simple `s -> t` paths and of their pairwise
/// edge-disjoint `p`-subsets. `Ok(None)` when no such subset exists.
pub fn brute_force_disjoint(
    g: &Digraph,
    s: VertexId,
    t: VertexId,
    p: usize,
    limits: EnumerationLimits,
) -> Result<Option<EnumeratedOptimum>, OracleError> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    if n > limits.max_vertices || m > limits.max_edges || m > 64 {
        return Err(OracleError::InstanceTooLarge {
            n,
            m,
            max_n: limits.max_vertices,
            max_m: limits.max_edges.min(64),
        });
    }
    let paths = simple_paths(g, s, t);
    let mut best: Option<EnumeratedOptimum> = None;
    if p == 0 || s == t {
        return Ok(None);
    }
    choose_disjoint(&paths, p, 0, 0, 0, 0, &mut best);
    Ok(best)
}

/// Every simple path as (edge mask, cost).
fn simple_paths(g: &Digraph, s: VertexId, t: VertexId) -> Vec<(u64, Cost)> {
    fn dfs(
        g: &Digraph,
        u: VertexId,
        t: VertexId,
        on_path: &mut Vec<bool>,
        mask: u64,
        cost: Cost,
        out: &mut Vec<(u64, Cost)>,
    ) {
        if u == t {
            out.push((mask, cost));
            return;
        }
        for &e in g.out_edges(u) {
            let v = g.edge(e).head;
            if !on_path[v] {
                on_path[v] = true;
                dfs(g, v, t, on_path, mask | (1 << e), cost + g.edge(e).cost, out);
                on_path[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    on_path[s] = true;
    dfs(g, s, t, &mut on_path, 0, 0, &mut out);
    out
}

fn choose_disjoint(
    paths: &[(u64, Cost)],
    remaining: usize,
    start: usize,
    used: u64,
    total: Cost,
    worst: Cost,
    best: &mut Option<EnumeratedOptimum>,
) {
    if remaining == 0 {
        *best = Some(match *best {
            None => EnumeratedOptimum {
                total,
                bottleneck: worst,
            },
            Some(b) => EnumeratedOptimum {
                total: b.total.min(total),
                bottleneck: b.bottleneck.min(worst),
            },
        });
        return;
    }
    for k in start..paths.len() {
        let (mask, cost) = paths[k];
        if mask & used == 0 {
            choose_disjoint(paths, remaining - 1, k + 1, used | mask, total + cost, worst.max(cost), best);
        }
    }
}

/// Maximum number of edge-disjoint `s -> t` paths (unit-capacity max-flow).
pub fn max_disjoint_paths(g: &Digraph, s: VertexId, t: VertexId) -> usize {
    max_disjoint_paths_capped(g, s, t, usize::MAX)
}

/// As [`max_disjoint_paths`], stopping once `cap` paths are found.
pub fn max_disjoint_paths_capped(g: &Digraph, s: VertexId, t: VertexId, cap: usize) -> usize {
    if s == t {
        return 0;
    }
    let n = g.vertex_count();
    let mut residual = Residual::new(g);
    let mut flow = 0;
    let mut pred: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    while flow < cap {
        seen.iter_mut().for_each(|x| *x = false);
        queue.clear();
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            residual.for_each_out(u, |oe, v| {
                if !seen[v] {
                    seen[v] = true;
                    pred[v] = Some(oe);
                    queue.push_back(v);
                }
            });
        }
        if !seen[t] {
            break;
        }
        let path = trace_path(g, &pred, s, t);
        residual.augment(&path);
        flow += 1;
    }
    flow
}
