use std::ops::Add;

use crate::graph::VertexId;
use crate::lex::LexCost;

/// Extraction key: the lexicographic length, then the number of forward
/// residual steps. The second part only orders paths of equal `(cost,
/// eta)`. Among those it prefers cancelling a solution edge to adding a
/// zero-cost preserver edge that would close a cycle with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathKey {
    pub lex: LexCost,
    pub forward_steps: u32,
}

impl PathKey {
    pub const ZERO: PathKey = PathKey {
        lex: LexCost::ZERO,
        forward_steps: 0,
    };
    pub const TOP: PathKey = PathKey {
        lex: LexCost::Top,
        forward_steps: 0,
    };

    pub fn new(lex: LexCost, forward_steps: u32) -> Self {
        Self { lex, forward_steps }
    }

    pub fn is_top(&self) -> bool {
        self.lex.is_top()
    }
}

impl Add for PathKey {
    type Output = PathKey;

    fn add(self, rhs: PathKey) -> PathKey {
        if self.is_top() || rhs.is_top() {
            return PathKey::TOP;
        }
        PathKey {
            lex: self.lex + rhs.lex,
            forward_steps: self.forward_steps + rhs.forward_steps,
        }
    }
}

impl std::fmt::Display for PathKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}+{}f", self.lex, self.forward_steps)
    }
}

/// Array-backed priority queue: `O(1)` decrease-key, `O(n)` extract-min.
/// Ties on equal keys go to the smallest vertex index.
#[derive(Debug, Clone)]
pub struct ArrayQueue<K = LexCost> {
    key: Vec<K>,
    queued: Vec<bool>,
    remaining: usize,
}

impl ArrayQueue<LexCost> {
    /// All `n` vertices queued with key `TOP`.
    pub fn new(n: usize) -> Self {
        Self::with_top(n, LexCost::Top)
    }
}

impl<K: Copy + Ord> ArrayQueue<K> {
    /// All `n` vertices queued with key `top`.
    pub fn with_top(n: usize, top: K) -> Self {
        Self {
            key: vec![top; n],
            queued: vec![true; n],
            remaining: n,
        }
    }

    #[inline]
    pub fn key(&self, v: VertexId) -> K {
        self.key[v]
    }

    #[inline]
    pub fn is_queued(&self, v: VertexId) -> bool {
        self.queued[v]
    }

    pub fn len(&self) -> usize {
        self.remaining
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }

    /// Lowers the key of a queued vertex; larger keys are ignored.
    #[inline]
    pub fn decrease(&mut self, v: VertexId, key: K) {
        debug_assert!(self.queued[v]);
        if key < self.key[v] {
            self.key[v] = key;
        }
    }

    pub fn pop_min(&mut self) -> Option<(VertexId, K)> {
        let mut best: Option<VertexId> = None;
        for v in 0..self.key.len() {
            if self.queued[v] && best.is_none_or(|b| self.key[v] < self.key[b]) {
                best = Some(v);
            }
        }
        let v = best?;
        self.queued[v] = false;
        self.remaining -= 1;
        Some((v, self.key[v]))
    }
}
