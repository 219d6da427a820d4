mod common;

use multipath::engine::{self, EngineOptions};
use multipath::generate::generate_outconnected;
use multipath::oracle::ssp_fast;
use multipath::par::Execution;
use multipath::transforms::solve_underconnected;
use multipath::verify::{check_against_oracle, check_preserver};
use multipath::{Cost, Digraph, EdgeSet, OrientedEdge, VertexId};
use proptest::prelude::*;

use common::tiny_corpus;

fn keep() -> EngineOptions {
    EngineOptions {
        keep_intermediate: true,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_oracle_at_every_phase(
        n in 3usize..25,
        p_raw in 1usize..5,
        extra in 0usize..60,
        max_cost in 0i64..12,
        seed in any::<u64>(),
    ) {
        let p = p_raw.min(n - 1);
        let g = generate_outconnected(n, p, extra, max_cost, seed).unwrap();
        let out = engine::run(&g, 0, p, keep()).unwrap();
        prop_assert!(check_against_oracle(&g, 0, p, &out.solutions, Execution::Sequential).passed());
        for t in 1..n {
            let engine_costs = out.flow_levels(&g, t).unwrap().costs();
            prop_assert_eq!(engine_costs, ssp_fast(&g, 0, t, p).costs());
        }
        let rep = check_preserver(&g, 0, p, &out.preserver, Some(&out.solutions), Execution::Sequential);
        prop_assert!(rep.passed(), "{:?}", rep);

        let par = engine::run(&g, 0, p, EngineOptions { execution: Execution::Parallel, ..Default::default() }).unwrap();
        prop_assert_eq!(&par.preserver_edges, &out.preserver_edges);
    }
}

/// Oriented edges of the residual graph of `solution`: every edge once,
/// reversed iff it is in the solution.
fn residual(g: &Digraph, solution: &EdgeSet) -> Vec<OrientedEdge> {
    (0..g.edge_count())
        .map(|e| OrientedEdge {
            edge: e,
            forward: !solution.contains(e),
        })
        .collect()
}

/// Minimum cost of a `k`-unit flow from `t` to each `v` in the residual
/// graph, by enumerating every subset of residual edges.
fn min_residual_flows(g: &Digraph, res: &[OrientedEdge], t: VertexId, k: i64) -> Vec<Option<Cost>> {
    let n = g.vertex_count();
    let m = res.len();
    let ends: Vec<(VertexId, VertexId, Cost)> = res.iter().map(|oe| (oe.tail(g), oe.head(g), oe.cost(g))).collect();
    let mut best: Vec<Option<Cost>> = vec![None; n];
    let mut div = vec![0i64; n];
    for mask in 0u64..(1 << m) {
        div.iter_mut().for_each(|d| *d = 0);
        let mut cost = 0;
        for (i, &(u, w, c)) in ends.iter().enumerate() {
            if mask >> i & 1 == 1 {
                div[u] += 1;
                div[w] -= 1;
                cost += c;
            }
        }
        if div[t] != k {
            continue;
        }
        let mut sink = None;
        let ok = (0..n).filter(|&x| x != t).all(|x| match div[x] {
            0 => true,
            d if d == -k && sink.is_none() => {
                sink = Some(x);
                true
            }
            _ => false,
        });
        if let (true, Some(v)) = (ok, sink) {
            if best[v].is_none_or(|b| cost < b) {
                best[v] = Some(cost);
            }
        }
    }
    best
}

/// For targets `t != v`, the edges where `S_{i-1}^t` and `S_{i-1}^v` differ
/// (forward if only in `S^v`, reversed if only in `S^t`) form a minimum-cost
/// `(i-1)`-unit flow from `t` to `v` in the residual graph of `S^t`.
#[test]
fn difference_of_solutions_is_a_min_cost_residual_flow() {
    let mut pairs_checked = 0;
    for inst in tiny_corpus(60, 21) {
        let g = &inst.graph;
        let Ok(out) = engine::run(g, 0, inst.p, keep()) else { continue };
        let n = g.vertex_count();
        let snaps = out.intermediate.as_ref().unwrap();
        for i in 2..=inst.p {
            let k = (i - 1) as i64;
            let sols = &snaps[i - 2].solutions;
            for t in 1..n {
                let st = sols[t].as_ref().unwrap();
                let best = min_residual_flows(g, &residual(g, st), t, k);
                for v in (1..n).filter(|&v| v != t) {
                    let sv = sols[v].as_ref().unwrap();
                    let mut div = vec![0i64; n];
                    let mut cost = 0;
                    for e in 0..g.edge_count() {
                        let oe = match (st.contains(e), sv.contains(e)) {
                            (false, true) => OrientedEdge::forward(e),
                            (true, false) => OrientedEdge::backward(e),
                            _ => continue,
                        };
                        div[oe.tail(g)] += 1;
                        div[oe.head(g)] -= 1;
                        cost += oe.cost(g);
                    }
                    let mut expected = vec![0i64; n];
                    expected[t] = k;
                    expected[v] = -k;
                    assert_eq!(div, expected, "{} phase {i} t={t} v={v}", inst.name);
                    assert_eq!(cost, sv.cost(g) - st.cost(g));
                    assert_eq!(best[v], Some(cost), "{} phase {i} t={t} v={v}", inst.name);
                    pairs_checked += 1;
                }
            }
        }
    }
    assert!(pairs_checked > 200, "only {pairs_checked} pairs");
}

#[test]
fn every_single_edge_deletion_breaks_the_preserver() {
    for seed in 0..6 {
        let p = 2 + seed as usize % 2;
        let g = generate_outconnected(12, p, 20, 9, seed).unwrap();
        let out = engine::run(&g, 0, p, EngineOptions::default()).unwrap();
        for &e in &out.preserver_edges {
            let mut mutant = out.preserver.clone();
            mutant.remove(e);
            let rep = check_preserver(&g, 0, p, &mutant, None, Execution::Sequential);
            assert!(!rep.size_ok());
            assert!(
                rep.level_mismatches.iter().any(|mm| mm.target == g.edge(e).head && mm.level == p),
                "seed {seed}: deleting {e} left level {p} intact"
            );
        }
    }
}

#[test]
fn augmenting_an_outconnected_graph_changes_nothing() {
    for seed in 0..10 {
        let g = generate_outconnected(25, 3, 30, 15, seed).unwrap();
        let direct = engine::run(&g, 0, 3, EngineOptions::default()).unwrap();
        let general = solve_underconnected(&g, 0, 3, EngineOptions::default()).unwrap();
        assert_eq!(general.preserver.len(), 3 * 24);
        assert!(general.sigma[1..].iter().all(|&s| s == 3));
        for t in 1..25 {
            assert_eq!(
                general.solutions[t].as_ref().unwrap().cost(&g),
                direct.solution_cost(&g, t).unwrap()
            );
        }
    }
}

#[test]
fn p1_on_unreachable_targets_yields_a_partial_tree() {
    let g = Digraph::new(5, [(0, 1, 2), (1, 2, 2), (0, 2, 5), (3, 4, 1)]).unwrap();
    let general = solve_underconnected(&g, 0, 1, EngineOptions::default()).unwrap();
    assert_eq!(general.sigma, vec![0, 1, 1, 0, 0]);
    assert_eq!(general.preserver.sorted(), vec![0, 1]);
    assert_eq!(general.solutions[3].as_ref().unwrap().len(), 0);
}
