//! Immutable directed multigraph with identified edges.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::lex::LexCost;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;
/// Dense edge index in `[0, m)`.
pub type EdgeId = usize;
/// Exact edge cost. Input costs are non-negative; residual costs may be negative.
pub type Cost = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} out of range for a graph with {m} edges")]
    EdgeOutOfRange { edge: usize, m: usize },
    #[error("edge {tail}->{head} has negative cost {cost}")]
    NegativeCost { tail: VertexId, head: VertexId, cost: Cost },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("total edge cost overflows 64-bit arithmetic")]
    CostOverflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: Cost,
}

/// Directed multigraph. Parallel edges and mutually reverse pairs are
/// allowed; self-loops and negative costs are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<EdgeRecord>,
    out_index: Vec<Vec<EdgeId>>,
    in_index: Vec<Vec<EdgeId>>,
    total_cost: Cost,
}

impl Digraph {
    /// Builds a graph from `(tail, head, cost)` triples; edge ids follow the
    /// iteration order.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Cost)>,
    {
        let mut records = Vec::new();
        let mut out_index = vec![Vec::new(); n];
        let mut in_index = vec![Vec::new(); n];
        let mut total_cost: Cost = 0;
        for (id, (tail, head, cost)) in edges.into_iter().enumerate() {
            for v in [tail, head] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if tail == head {
                return Err(GraphError::SelfLoop(tail));
            }
            if cost < 0 {
                return Err(GraphError::NegativeCost { tail, head, cost });
            }
            total_cost = total_cost.checked_add(cost).ok_or(GraphError::CostOverflow)?;
            out_index[tail].push(id);
            in_index[head].push(id);
            records.push(EdgeRecord { id, tail, head, cost });
        }
        Ok(Self {
            n,
            edges: records,
            out_index,
            in_index,
            total_cost,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        &self.edges[id]
    }

    pub fn checked_edge(&self, id: EdgeId) -> Result<&EdgeRecord, GraphError> {
        self.edges.get(id).ok_or(GraphError::EdgeOutOfRange {
            edge: id,
            m: self.edges.len(),
        })
    }

    #[inline]
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_index[v]
    }

    #[inline]
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_index[v]
    }

    /// Sum of all edge costs, `c(E(G))`.
    pub fn total_cost(&self) -> Cost {
        self.total_cost
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Subgraph on the same vertex set keeping only `keep` edges. Returns the
    /// subgraph and, for each of its edge ids, the originating edge id here.
    pub fn edge_subgraph<I>(&self, keep: I) -> (Digraph, Vec<EdgeId>)
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut origin: Vec<EdgeId> = keep.into_iter().collect();
        origin.sort_unstable();
        origin.dedup();
        let g = Digraph::new(
            self.n,
            origin.iter().map(|&e| {
                let r = &self.edges[e];
                (r.tail, r.head, r.cost)
            }),
        )
        .expect("subgraph of a valid graph is valid");
        (g, origin)
    }

    /// Vertices reachable from `s` along forward edges.
    pub fn reachable_from(&self, s: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.out_index[u] {
                let v = self.edges[e].head;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// An original edge traversed forward, or its residual reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn forward(edge: EdgeId) -> Self {
        Self { edge, forward: true }
    }

    pub fn backward(edge: EdgeId) -> Self {
        Self { edge, forward: false }
    }

    #[inline]
    pub fn tail(&self, g: &Digraph) -> VertexId {
        let r = g.edge(self.edge);
        if self.forward {
            r.tail
        } else {
            r.head
        }
    }

    #[inline]
    pub fn head(&self, g: &Digraph) -> VertexId {
        let r = g.edge(self.edge);
        if self.forward {
            r.head
        } else {
            r.tail
        }
    }

    /// `+c(e)` forward, `-c(e)` reversed.
    #[inline]
    pub fn cost(&self, g: &Digraph) -> Cost {
        let c = g.edge(self.edge).cost;
        if self.forward {
            c
        } else {
            -c
        }
    }

    /// Lexicographic length `(cost, eta)` of this single step. Only forward
    /// edges outside the preserver count towards `eta`; reversed edges belong
    /// to a solution already contained in the preserver.
    #[inline]
    pub fn lex_cost<P: EdgeMembership + ?Sized>(&self, g: &Digraph, preserver: &P) -> LexCost {
        let hops = u32::from(self.forward && !preserver.contains_edge(self.edge));
        LexCost::new(self.cost(g), hops)
    }
}

/// Checked form of [`OrientedEdge::lex_cost`].
pub fn oriented_cost<P: EdgeMembership + ?Sized>(
    g: &Digraph,
    e: OrientedEdge,
    preserver: &P,
) -> Result<LexCost, GraphError> {
    g.checked_edge(e.edge)?;
    Ok(e.lex_cost(g, preserver))
}

/// Lexicographic length of an oriented path.
pub fn path_lex_cost<P: EdgeMembership + ?Sized>(
    g: &Digraph,
    path: &[OrientedEdge],
    preserver: &P,
) -> LexCost {
    path.iter()
        .fold(LexCost::ZERO, |acc, e| acc + e.lex_cost(g, preserver))
}

pub trait EdgeMembership {
    fn contains_edge(&self, e: EdgeId) -> bool;
}

impl EdgeMembership for FixedBitSet {
    #[inline]
    fn contains_edge(&self, e: EdgeId) -> bool {
        self.contains(e)
    }
}

/// Set of edge ids with constant-time membership.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    inner: HashSet<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            inner: HashSet::with_capacity(cap),
        }
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.inner.insert(e)
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.inner.remove(&e)
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.inner.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// Unordered iteration.
    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.inner.iter().copied()
    }

    /// Members in increasing id order.
    pub fn sorted(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.inner.iter().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.inner.is_subset(&other.inner)
    }

    pub fn cost(&self, g: &Digraph) -> Cost {
        self.inner.iter().map(|&e| g.edge(e).cost).sum()
    }
}

impl EdgeMembership for EdgeSet {
    #[inline]
    fn contains_edge(&self, e: EdgeId) -> bool {
        self.contains(e)
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = EdgeId>>(iter: T) -> Self {
        Self {
            inner: iter.into_iter().collect(),
        }
    }
}

impl Extend<EdgeId> for EdgeSet {
    fn extend<T: IntoIterator<Item = EdgeId>>(&mut self, iter: T) {
        self.inner.extend(iter)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `s=0, a=1, b=2, t=3`; e0:(0,1,1) e1:(1,3,3) e2:(0,2,3) e3:(2,3,1) e4:(1,2,1).
    pub fn d1() -> Digraph {
        Digraph::new(4, [(0, 1, 1), (1, 3, 3), (0, 2, 3), (2, 3, 1), (1, 2, 1)]).unwrap()
    }

    /// `d1` plus e5:(2,1,5); 2-edge-outconnected from 0.
    pub fn d2() -> Digraph {
        Digraph::new(
            4,
            [(0, 1, 1), (1, 3, 3), (0, 2, 3), (2, 3, 1), (1, 2, 1), (2, 1, 5)],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::d1;
    use super::*;

    #[test]
    fn indices_are_inverse_of_edge_list() {
        let g = d1();
        for r in g.edges() {
            assert_eq!(g.out_edges(r.tail).iter().filter(|&&e| e == r.id).count(), 1);
            assert_eq!(g.in_edges(r.head).iter().filter(|&&e| e == r.id).count(), 1);
        }
        let total: usize = (0..4).map(|v| g.out_edges(v).len()).sum();
        assert_eq!(total, g.edge_count());
        assert_eq!(g.total_cost(), 9);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Digraph::new(2, [(0, 0, 1)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert!(matches!(
            Digraph::new(2, [(0, 1, -3)]),
            Err(GraphError::NegativeCost { cost: -3, .. })
        ));
        assert!(matches!(
            Digraph::new(2, [(0, 2, 1)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert_eq!(
            Digraph::new(3, [(0, 1, i64::MAX), (1, 2, 1)]).unwrap_err(),
            GraphError::CostOverflow
        );
    }

    #[test]
    fn parallel_and_antiparallel_edges_are_allowed() {
        let g = Digraph::new(2, [(0, 1, 1), (0, 1, 2), (1, 0, 3)]).unwrap();
        assert_eq!(g.out_edges(0), &[0, 1]);
        assert_eq!(g.in_edges(0), &[2]);
    }

    #[test]
    fn oriented_cost_follows_direction_and_preserver() {
        let g = Digraph::new(2, [(0, 1, 3)]).unwrap();
        let empty = EdgeSet::new();
        let with: EdgeSet = [0].into_iter().collect();
        let fwd = OrientedEdge::forward(0);
        let bwd = OrientedEdge::backward(0);
        assert_eq!(oriented_cost(&g, fwd, &empty).unwrap(), LexCost::new(3, 1));
        assert_eq!(oriented_cost(&g, fwd, &with).unwrap(), LexCost::new(3, 0));
        assert_eq!(oriented_cost(&g, bwd, &empty).unwrap(), LexCost::new(-3, 0));
        assert_eq!((bwd.tail(&g), bwd.head(&g)), (1, 0));
        assert!(matches!(
            oriented_cost(&g, OrientedEdge::forward(5), &empty),
            Err(GraphError::EdgeOutOfRange { edge: 5, m: 1 })
        ));
    }

    #[test]
    fn path_cost_is_sum_of_steps() {
        let g = d1();
        let pre: EdgeSet = [0, 4, 3].into_iter().collect();
        let path = [
            OrientedEdge::forward(2),
            OrientedEdge::backward(4),
            OrientedEdge::forward(1),
        ];
        assert_eq!(path_lex_cost(&g, &path, &pre), LexCost::new(5, 2));
    }

    #[test]
    fn edge_subgraph_keeps_origin() {
        let g = d1();
        let (h, origin) = g.edge_subgraph([4, 0, 4]);
        assert_eq!(origin, vec![0, 4]);
        assert_eq!(h.edge_count(), 2);
        assert_eq!((h.edge(1).tail, h.edge(1).head, h.edge(1).cost), (1, 2, 1));
    }
}
