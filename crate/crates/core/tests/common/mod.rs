#![allow(dead_code)]

use multipath::generate::{generate_outconnected, generate_uniform};
use multipath::verify::check_outconnectivity;
use multipath::{Cost, Digraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn d1() -> Digraph {
    Digraph::new(4, [(0, 1, 1), (1, 3, 3), (0, 2, 3), (2, 3, 1), (1, 2, 1)]).unwrap()
}

pub fn d2() -> Digraph {
    Digraph::new(4, [(0, 1, 1), (1, 3, 3), (0, 2, 3), (2, 3, 1), (1, 2, 1), (2, 1, 5)]).unwrap()
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Digraph,
    pub p: usize,
}

/// `p`-edge-outconnected graphs rooted at 0 with `n` in `[5, 60]`, `p` in
/// `[2, 5]`, and sparse, medium or dense edge counts. Every third instance
/// draws costs from `{0, 1, 2}` so that ties and zero-cost cycles are common.
pub fn outconnected_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(5..=60);
            let p = rng.gen_range(2..=5).min(n - 1);
            let extra = match k % 3 {
                0 => rng.gen_range(0..=n),
                1 => rng.gen_range(n..=4 * n),
                _ => n * (n - 1) / 4,
            };
            let max_cost: Cost = if k % 3 == 2 { 2 } else { rng.gen_range(1..=100) };
            let s = rng.gen();
            Instance {
                name: format!("oc#{k} n={n} p={p} extra={extra} c<={max_cost} seed={s}"),
                graph: generate_outconnected(n, p, extra, max_cost, s).unwrap(),
                p,
            }
        })
        .collect()
}

/// Instances with `n <= 8`, `m <= 18` and `p` in `{2, 3}`. Half are
/// `p`-outconnected by construction, half are uniform and usually not.
pub fn tiny_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(4..=8);
            let p = rng.gen_range(2..=3usize);
            let max_cost = if k % 4 == 3 { 3 } else { 20 };
            let s = rng.gen();
            let graph = if k % 2 == 0 {
                let n = n.min(18 / p + 1);
                let base = p * (n - 1);
                let extra = rng.gen_range(0..=18usize.saturating_sub(base).min(6));
                generate_outconnected(n, p, extra, max_cost, s).unwrap()
            } else {
                let m = rng.gen_range(n..=18);
                generate_uniform(n, m, max_cost, s).unwrap()
            };
            assert!(graph.edge_count() <= 18);
            Instance {
                name: format!("tiny#{k} n={} m={} p={p} seed={s}", graph.vertex_count(), graph.edge_count()),
                graph,
                p,
            }
        })
        .collect()
}

/// Graphs where at least one target has fewer than `p` edge-disjoint paths
/// from 0 (some targets may be unreachable).
pub fn underconnected_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut k = 0;
    while out.len() < count {
        k += 1;
        let n = rng.gen_range(5..=40);
        let p = rng.gen_range(2..=4).min(n - 1);
        let s = rng.gen();
        let graph = match k % 3 {
            0 => generate_uniform(n, rng.gen_range(n..=3 * n), 50, s).unwrap(),
            1 => generate_outconnected(n, p - 1, rng.gen_range(0..=n), 50, s).unwrap(),
            _ => generate_outconnected(n, 1, rng.gen_range(0..=2 * n), 3, s).unwrap(),
        };
        if check_outconnectivity(&graph, 0, p).values().all(|&c| c >= p) {
            continue;
        }
        out.push(Instance {
            name: format!("uc#{k} n={n} m={} p={p} seed={s}", graph.edge_count()),
            graph,
            p,
        });
    }
    out
}

/// Marginal costs `levels[i] - levels[i-1]` are non-decreasing.
pub fn is_convex(costs: &[Cost]) -> bool {
    let marg: Vec<Cost> = std::iter::once(0)
        .chain(costs.iter().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect();
    marg.windows(2).all(|w| w[0] <= w[1])
}
