//! Independent checks on solver output: flow decomposition, oracle cost
//! equivalence, preserver audits and connectivity.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cost, Digraph, EdgeId, EdgeSet, VertexId};
use crate::oracle::{max_disjoint_paths_capped, ssp_fast};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("vertex {vertex} has net outflow {value}, expected {expected}")]
    BadDivergence {
        vertex: VertexId,
        value: i64,
        expected: i64,
    },
    #[error("walk stuck at vertex {vertex} before reaching the target")]
    CycleStuck { vertex: VertexId },
    #[error("edges {0:?} are left over after peeling all paths")]
    LeftoverEdges(Vec<EdgeId>),
    #[error("left-over cycles have non-zero total cost {0}")]
    CostlyLeftover(Cost),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DecomposeMode {
    /// Any edge outside the peeled paths is an error.
    #[default]
    Strict,
    /// Left-over edges are dropped if their total cost is zero.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecomposedPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub paths: Vec<DecomposedPath>,
    pub leftover: EdgeSet,
}

/// Splits `solution` into `p` edge-disjoint `s -> t` paths.
///
/// The set is read as a unit flow: net outflow must be `p` at `s`, `-p` at
/// `t` and zero elsewhere. Paths are peeled by walking from `s` and always
/// taking the unused out-edge with the smallest id; a walk that revisits a
/// vertex has the closed loop cut out and set aside as left-over.
pub fn decompose(
    g: &Digraph,
    solution: &EdgeSet,
    s: VertexId,
    t: VertexId,
    p: usize,
    mode: DecomposeMode,
) -> Result<Decomposition, DecomposeError> {
    let n = g.vertex_count();
    let edges = solution.sorted();
    if let Some(&e) = edges.iter().find(|&&e| e >= g.edge_count()) {
        return Err(DecomposeError::UnknownEdge(e));
    }
    let mut divergence = vec![0i64; n];
    for &e in &edges {
        divergence[g.edge(e).tail] += 1;
        divergence[g.edge(e).head] -= 1;
    }
    for (v, &value) in divergence.iter().enumerate() {
        let expected = if s == t {
            0
        } else if v == s {
            p as i64
        } else if v == t {
            -(p as i64)
        } else {
            0
        };
        if value != expected {
            return Err(DecomposeError::BadDivergence { vertex: v, value, expected });
        }
    }

    // per-vertex out-edges in increasing id order, consumed front to back
    let mut out: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for &e in &edges {
        out[g.edge(e).tail].push(e);
    }
    let mut cursor = vec![0usize; n];
    let mut used: BTreeMap<EdgeId, bool> = edges.iter().map(|&e| (e, false)).collect();
    let mut leftover = EdgeSet::new();
    let mut pos: Vec<Option<usize>> = vec![None; n];
    let mut paths = Vec::with_capacity(p);

    for _ in 0..p {
        if s == t {
            break;
        }
        let mut verts = vec![s];
        let mut walk: Vec<EdgeId> = Vec::new();
        pos[s] = Some(0);
        let mut u = s;
        while u != t {
            let e = loop {
                let Some(&e) = out[u].get(cursor[u]) else {
                    return Err(DecomposeError::CycleStuck { vertex: u });
                };
                cursor[u] += 1;
                if !used[&e] {
                    break e;
                }
            };
            used.insert(e, true);
            let v = g.edge(e).head;
            if let Some(k) = pos[v] {
                // loop v -> ... -> u -> v: set it aside
                leftover.insert(e);
                for &ce in &walk[k..] {
                    leftover.insert(ce);
                }
                for &cv in &verts[k + 1..] {
                    pos[cv] = None;
                }
                walk.truncate(k);
                verts.truncate(k + 1);
                u = v;
                continue;
            }
            walk.push(e);
            verts.push(v);
            pos[v] = Some(verts.len() - 1);
            u = v;
        }
        for &v in &verts {
            pos[v] = None;
        }
        let cost = walk.iter().map(|&e| g.edge(e).cost).sum();
        paths.push(DecomposedPath {
            vertices: verts,
            edges: walk,
            cost,
        });
    }
    leftover.extend(used.iter().filter(|(_, &u)| !u).map(|(&e, _)| e));

    if !leftover.is_empty() {
        match mode {
            DecomposeMode::Strict => return Err(DecomposeError::LeftoverEdges(leftover.sorted())),
            DecomposeMode::Lenient => {
                let cost = leftover.cost(g);
                if cost != 0 {
                    return Err(DecomposeError::CostlyLeftover(cost));
                }
                log::warn!(
                    "dropping {} zero-cost left-over edges from {s}->{t} decomposition: {:?}",
                    leftover.len(),
                    leftover.sorted()
                );
            }
        }
    }
    Ok(Decomposition { paths, leftover })
}

/// True iff no vertex other than the endpoints lies on two paths.
pub fn check_vertex_disjoint(dec: &Decomposition) -> bool {
    let mut seen = std::collections::HashSet::new();
    dec.paths.iter().all(|path| {
        let inner = path.vertices.len().saturating_sub(1);
        path.vertices[1.min(inner)..inner].iter().all(|&v| seen.insert(v))
    })
}

/// `min(lambda(t), p)` for every `t != s`.
pub fn check_outconnectivity(g: &Digraph, s: VertexId, p: usize) -> BTreeMap<VertexId, usize> {
    check_outconnectivity_with(g, s, p, Execution::Sequential)
}

pub fn check_outconnectivity_with(
    g: &Digraph,
    s: VertexId,
    p: usize,
    exec: Execution,
) -> BTreeMap<VertexId, usize> {
    let targets: Vec<VertexId> = (0..g.vertex_count()).filter(|&t| t != s).collect();
    let caps = par::map(exec, &targets, |&t| max_disjoint_paths_capped(g, s, t, p));
    targets.into_iter().zip(caps).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostMismatch {
    pub target: VertexId,
    pub level: usize,
    pub found: Option<Cost>,
    pub expected: Option<Cost>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub targets_checked: usize,
    pub mismatches: Vec<CostMismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&CostMismatch> {
        self.mismatches.first()
    }
}

/// Compares `cost(solutions[t])` with the oracle's level-`p` cost for
/// every `t != s`. `solutions` is indexed by vertex.
pub fn check_against_oracle(
    g: &Digraph,
    s: VertexId,
    p: usize,
    solutions: &[Option<EdgeSet>],
    exec: Execution,
) -> OracleReport {
    let levels = vec![p; g.vertex_count()];
    check_levels_against_oracle(g, s, &levels, solutions, exec)
}

/// As [`check_against_oracle`] with a per-target level, e.g. `sigma(t)`.
/// The oracle must reach exactly that level: a target with more disjoint
/// paths available than claimed (below the cap) counts as a mismatch.
pub fn check_levels_against_oracle(
    g: &Digraph,
    s: VertexId,
    levels: &[usize],
    solutions: &[Option<EdgeSet>],
    exec: Execution,
) -> OracleReport {
    let targets: Vec<VertexId> = (0..g.vertex_count()).filter(|&t| t != s).collect();
    let results = par::map(exec, &targets, |&t| {
        let level = levels[t];
        let found = solutions.get(t).and_then(|s| s.as_ref()).map(|s| s.cost(g));
        let oracle = ssp_fast(g, s, t, level);
        let expected = if level == 0 {
            Some(0)
        } else {
            oracle.level(level).map(|l| l.cost)
        };
        (found == expected).then_some(()).ok_or(CostMismatch {
            target: t,
            level,
            found,
            expected,
        })
    });
    OracleReport {
        targets_checked: targets.len(),
        mismatches: results.into_iter().filter_map(Result::err).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeViolation {
    pub vertex: VertexId,
    pub in_degree: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreserverReport {
    pub size: usize,
    pub expected_size: usize,
    pub degree_violations: Vec<DegreeViolation>,
    /// Levels where the optimum inside the preserver differs from the
    /// optimum in the whole graph (`found` is the preserver's).
    pub level_mismatches: Vec<CostMismatch>,
    /// Targets whose solution is not contained in the preserver.
    pub containment_violations: Vec<VertexId>,
}

impl PreserverReport {
    pub fn size_ok(&self) -> bool {
        self.size == self.expected_size && self.degree_violations.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.size_ok() && self.level_mismatches.is_empty() && self.containment_violations.is_empty()
    }
}

/// Audits a `p`-multipath preserver of a `p`-edge-outconnected graph:
/// size `p(n-1)` with in-degree 0 at `s` and `p` elsewhere; optimal costs at
/// every level `i <= p` reproduced inside the preserver; and, when given,
/// every solution contained in it.
pub fn check_preserver(
    g: &Digraph,
    s: VertexId,
    p: usize,
    preserver: &EdgeSet,
    solutions: Option<&[Option<EdgeSet>]>,
    exec: Execution,
) -> PreserverReport {
    let mut expected = vec![p; g.vertex_count()];
    expected[s] = 0;
    check_preserver_with_degrees(g, s, &expected, preserver, solutions, exec)
}

/// [`check_preserver`] with a per-vertex required in-degree (e.g.
/// `sigma(t)` for graphs that are not `p`-edge-outconnected); levels are
/// checked up to that degree.
pub fn check_preserver_with_degrees(
    g: &Digraph,
    s: VertexId,
    expected_degree: &[usize],
    preserver: &EdgeSet,
    solutions: Option<&[Option<EdgeSet>]>,
    exec: Execution,
) -> PreserverReport {
    let n = g.vertex_count();
    let mut in_degree = vec![0usize; n];
    for e in preserver.iter() {
        in_degree[g.edge(e).head] += 1;
    }
    let degree_violations = (0..n)
        .filter(|&v| in_degree[v] != expected_degree[v])
        .map(|v| DegreeViolation {
            vertex: v,
            in_degree: in_degree[v],
            expected: expected_degree[v],
        })
        .collect();

    let (h, _) = g.edge_subgraph(preserver.iter());
    let targets: Vec<VertexId> = (0..n).filter(|&t| t != s).collect();
    let level_mismatches = par::map(exec, &targets, |&t| {
        let k = expected_degree[t];
        let in_g = ssp_fast(g, s, t, k);
        let in_h = ssp_fast(&h, s, t, k);
        (1..=k)
            .filter_map(|i| {
                let expected = in_g.level(i).map(|l| l.cost);
                let found = in_h.level(i).map(|l| l.cost);
                (expected != found).then_some(CostMismatch {
                    target: t,
                    level: i,
                    found,
                    expected,
                })
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let containment_violations = match solutions {
        Some(sols) => targets
            .iter()
            .copied()
            .filter(|&t| sols.get(t).and_then(|x| x.as_ref()).is_none_or(|st| !st.is_subset(preserver)))
            .collect(),
        None => Vec::new(),
    };

    PreserverReport {
        size: preserver.len(),
        expected_size: expected_degree.iter().sum(),
        degree_violations,
        level_mismatches,
        containment_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{self, EngineOptions};
    use crate::graph::fixtures::{d1, d2};

    fn set(ids: &[EdgeId]) -> EdgeSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn decompose_two_paths_on_d1() {
        let g = d1();
        let dec = decompose(&g, &set(&[0, 1, 2, 3]), 0, 3, 2, DecomposeMode::Strict).unwrap();
        let verts: Vec<_> = dec.paths.iter().map(|p| p.vertices.clone()).collect();
        assert_eq!(verts, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert!(dec.leftover.is_empty());
        assert_eq!(dec.paths[0].cost, 4);
        assert!(check_vertex_disjoint(&dec));
    }

    #[test]
    fn decompose_single_path() {
        let g = d1();
        let dec = decompose(&g, &set(&[0, 4, 3]), 0, 3, 1, DecomposeMode::Strict).unwrap();
        assert_eq!(dec.paths[0].vertices, vec![0, 1, 2, 3]);
        assert_eq!(dec.paths[0].edges, vec![0, 4, 3]);
        assert!(check_vertex_disjoint(&dec));
    }

    #[test]
    fn decompose_bad_divergence() {
        let g = d1();
        assert_eq!(
            decompose(&g, &set(&[0]), 0, 3, 2, DecomposeMode::Strict).unwrap_err(),
            DecomposeError::BadDivergence {
                vertex: 0,
                value: 1,
                expected: 2
            }
        );
        assert_eq!(
            decompose(&g, &set(&[42]), 0, 3, 1, DecomposeMode::Strict).unwrap_err(),
            DecomposeError::UnknownEdge(42)
        );
    }

    #[test]
    fn leftover_cycles_strict_and_lenient() {
        // path 0->1->3 plus the zero-cost cycle 1->2->1
        let g = Digraph::new(4, [(0, 1, 1), (1, 2, 0), (2, 1, 0), (1, 3, 1)]).unwrap();
        let sol = set(&[0, 1, 2, 3]);
        assert_eq!(
            decompose(&g, &sol, 0, 3, 1, DecomposeMode::Strict).unwrap_err(),
            DecomposeError::LeftoverEdges(vec![1, 2])
        );
        let dec = decompose(&g, &sol, 0, 3, 1, DecomposeMode::Lenient).unwrap();
        assert_eq!(dec.paths[0].vertices, vec![0, 1, 3]);
        assert_eq!(dec.leftover, set(&[1, 2]));

        let g = Digraph::new(4, [(0, 1, 1), (1, 2, 4), (2, 1, 0), (1, 3, 1)]).unwrap();
        assert_eq!(
            decompose(&g, &sol, 0, 3, 1, DecomposeMode::Lenient).unwrap_err(),
            DecomposeError::CostlyLeftover(4)
        );
    }

    #[test]
    fn vertex_disjointness() {
        let path = |v: Vec<VertexId>| DecomposedPath {
            vertices: v,
            edges: vec![],
            cost: 0,
        };
        let dec = |ps: Vec<Vec<VertexId>>| Decomposition {
            paths: ps.into_iter().map(path).collect(),
            leftover: EdgeSet::new(),
        };
        assert!(check_vertex_disjoint(&dec(vec![vec![0, 1, 3], vec![0, 2, 3]])));
        assert!(!check_vertex_disjoint(&dec(vec![vec![0, 1, 2, 3], vec![0, 2, 3]])));
        assert!(check_vertex_disjoint(&dec(vec![vec![0, 1, 2, 3]])));
        assert!(check_vertex_disjoint(&dec(vec![vec![0, 3], vec![0, 3]])));
    }

    #[test]
    fn oracle_check_on_d2() {
        let g = d2();
        let out = engine::run(&g, 0, 2, EngineOptions::default()).unwrap();
        let report = check_against_oracle(&g, 0, 2, &out.solutions, Execution::Sequential);
        assert!(report.passed());
        assert_eq!(report.targets_checked, 3);

        let mut tampered = out.solutions.clone();
        tampered[1] = Some(set(&[0, 2, 4]));
        let report = check_against_oracle(&g, 0, 2, &tampered, Execution::Sequential);
        assert_eq!(
            report.first_mismatch(),
            Some(&CostMismatch {
                target: 1,
                level: 2,
                found: Some(5),
                expected: Some(9)
            })
        );
    }

    #[test]
    fn oracle_check_p1_is_dijkstra() {
        let g = d2();
        let out = engine::run(&g, 0, 1, EngineOptions::default()).unwrap();
        assert!(check_against_oracle(&g, 0, 1, &out.solutions, Execution::Parallel).passed());
    }

    #[test]
    fn preserver_check_on_d2() {
        let g = d2();
        let out = engine::run(&g, 0, 2, EngineOptions::default()).unwrap();
        let rep = check_preserver(&g, 0, 2, &out.preserver, Some(&out.solutions), Execution::Sequential);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.size, 6);

        let mut cut = out.preserver.clone();
        cut.remove(5);
        let rep = check_preserver(&g, 0, 2, &cut, Some(&out.solutions), Execution::Sequential);
        assert!(!rep.size_ok());
        assert!(!rep.level_mismatches.is_empty());
        assert_eq!(rep.containment_violations, vec![1]);
    }

    #[test]
    fn preserver_check_p1_tree() {
        let g = d2();
        let out = engine::run(&g, 0, 1, EngineOptions::default()).unwrap();
        assert!(check_preserver(&g, 0, 1, &out.preserver, None, Execution::Sequential).passed());
    }

    #[test]
    fn outconnectivity_examples() {
        let g = d1();
        let caps = check_outconnectivity(&g, 0, 2);
        assert_eq!(caps, BTreeMap::from([(1, 1), (2, 2), (3, 2)]));

        let n = 5;
        let complete = Digraph::new(
            n,
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v, 1))),
        )
        .unwrap();
        for p in 1..7 {
            assert!(check_outconnectivity(&complete, 0, p).values().all(|&c| c == p.min(n - 1)));
        }

        let disconnected = Digraph::new(3, [(0, 1, 1)]).unwrap();
        assert_eq!(check_outconnectivity(&disconnected, 0, 2)[&2], 0);
    }
}
