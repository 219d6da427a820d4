use fixedbitset::FixedBitSet;

use crate::graph::{Digraph, EdgeId, EdgeMembership, EdgeSet, VertexId};

/// Growing preserver edge set with constant-time membership, insertion
/// order, and per-vertex in-degree.
#[derive(Debug, Clone)]
pub struct Preserver {
    members: FixedBitSet,
    order: Vec<EdgeId>,
    in_degree: Vec<usize>,
}

impl Preserver {
    pub fn new(g: &Digraph) -> Self {
        Self {
            members: FixedBitSet::with_capacity(g.edge_count()),
            order: Vec::new(),
            in_degree: vec![0; g.vertex_count()],
        }
    }

    /// Returns false if `e` was already present.
    pub fn insert(&mut self, g: &Digraph, e: EdgeId) -> bool {
        if self.members.put(e) {
            return false;
        }
        self.order.push(e);
        self.in_degree[g.edge(e).head] += 1;
        true
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.members.contains(e)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.order
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_degree[v]
    }

    pub fn to_edge_set(&self) -> EdgeSet {
        self.order.iter().copied().collect()
    }
}

impl EdgeMembership for Preserver {
    #[inline]
    fn contains_edge(&self, e: EdgeId) -> bool {
        self.contains(e)
    }
}
