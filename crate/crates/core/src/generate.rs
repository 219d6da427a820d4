//! Seeded random instances.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Cost, Digraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("need 1 <= p <= n-1, got p={p} with n={n}")]
    BadConnectivity { n: usize, p: usize },
    #[error("max cost must be non-negative, got {0}")]
    NegativeMaxCost(Cost),
}

const DEDUP_ATTEMPTS: usize = 8;

/// Random digraph that is `p`-edge-outconnected from vertex 0.
///
/// It is the union of `p` random spanning arborescences rooted at 0 (each
/// one contributes distinct edge ids, so their root paths are edge-disjoint)
/// plus `extra_edges` uniform random edges. Arborescence parents are
/// re-drawn a few times to avoid parallel edges; parallel edges remain only
/// where the draw keeps colliding. Costs are uniform in `[0, max_cost]` and
/// the edge order is shuffled.
pub fn generate_outconnected(
    n: usize,
    p: usize,
    extra_edges: usize,
    max_cost: Cost,
    seed: u64,
) -> Result<Digraph, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewVertices(n));
    }
    if p == 0 || p > n - 1 {
        return Err(GenerateError::BadConnectivity { n, p });
    }
    if max_cost < 0 {
        return Err(GenerateError::NegativeMaxCost(max_cost));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(p * (n - 1) + extra_edges);

    let mut order: Vec<VertexId> = (1..n).collect();
    for _ in 0..p {
        order.shuffle(&mut rng);
        for (k, &v) in order.iter().enumerate() {
            // candidate parents: the root and every vertex placed before v
            let mut parent = 0;
            for _ in 0..DEDUP_ATTEMPTS {
                let pick = rng.gen_range(0..=k);
                parent = if pick == 0 { 0 } else { order[pick - 1] };
                if !pairs.contains(&(parent, v)) {
                    break;
                }
            }
            pairs.insert((parent, v));
            edges.push((parent, v));
        }
    }
    add_uniform_edges(&mut rng, n, extra_edges, &mut pairs, &mut edges);
    edges.shuffle(&mut rng);
    Ok(with_costs(&mut rng, n, edges, max_cost))
}

/// Uniform random digraph with `m` edges and no reachability guarantee.
pub fn generate_uniform(n: usize, m: usize, max_cost: Cost, seed: u64) -> Result<Digraph, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewVertices(n));
    }
    if max_cost < 0 {
        return Err(GenerateError::NegativeMaxCost(max_cost));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    add_uniform_edges(&mut rng, n, m, &mut pairs, &mut edges);
    Ok(with_costs(&mut rng, n, edges, max_cost))
}

fn add_uniform_edges(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
    pairs: &mut HashSet<(VertexId, VertexId)>,
    edges: &mut Vec<(VertexId, VertexId)>,
) {
    for _ in 0..count {
        let mut pair = (0, 1);
        for _ in 0..DEDUP_ATTEMPTS {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            pair = (u, v);
            if !pairs.contains(&pair) {
                break;
            }
        }
        pairs.insert(pair);
        edges.push(pair);
    }
}

fn with_costs(rng: &mut ChaCha8Rng, n: usize, edges: Vec<(VertexId, VertexId)>, max_cost: Cost) -> Digraph {
    let triples: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(0..=max_cost)))
        .collect();
    Digraph::new(n, triples).expect("generated edges are valid")
}
