use multipath::oracle::{max_disjoint_paths_capped, ssp_fast};
use multipath::par::{self, Execution};
use multipath::transforms::split_vertices;
use multipath::verify::{
    check_levels_against_oracle, check_outconnectivity_with, check_preserver_with_degrees, check_vertex_disjoint,
    decompose, DecomposeMode,
};
use multipath::{Digraph, EdgeSet, VertexId};

use crate::schema::{CheckResult, Level, PreserverKind, SolveResult, VerifyReport};

struct Report {
    checks: Vec<CheckResult>,
    notices: Vec<String>,
}

impl Report {
    fn push(&mut self, name: &str, failures: Vec<String>) -> bool {
        let passed = failures.is_empty();
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            failures,
        });
        passed
    }

    fn finish(self, level: Level) -> VerifyReport {
        VerifyReport {
            level,
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            notices: self.notices,
        }
    }
}

fn show(cost: Option<i64>) -> String {
    cost.map_or_else(|| "unreachable".to_string(), |c| c.to_string())
}

/// Audits a `solve` result against the graph it claims to solve.
pub fn verify(g: &Digraph, s: VertexId, res: &SolveResult, level: Level, exec: Execution) -> VerifyReport {
    let mut rep = Report {
        checks: Vec::new(),
        notices: Vec::new(),
    };
    let n = g.vertex_count();
    let mut header = Vec::new();
    if res.n != n || res.m != g.edge_count() {
        header.push(format!(
            "solution is for n={} m={}, graph has n={} m={}",
            res.n,
            res.m,
            n,
            g.edge_count()
        ));
    }
    if res.source != s + 1 {
        header.push(format!("solution source {} differs from graph source {}", res.source, s + 1));
    }
    if !rep.push("header", header) {
        return rep.finish(level);
    }

    let mut solutions: Vec<Option<EdgeSet>> = vec![None; n];
    let mut claimed_sigma = vec![0usize; n];
    let mut shape = Vec::new();
    for rec in &res.targets {
        if rec.t == 0 || rec.t > n || rec.t == s + 1 {
            shape.push(format!("record for invalid target {}", rec.t));
            continue;
        }
        if let Some(&e) = rec.edge_ids.iter().find(|&&e| e >= g.edge_count()) {
            shape.push(format!("target {}: edge id {e} out of range", rec.t));
            continue;
        }
        let set: EdgeSet = rec.edge_ids.iter().copied().collect();
        if set.len() != rec.edge_ids.len() {
            shape.push(format!("target {}: repeated edge ids", rec.t));
        }
        if solutions[rec.t - 1].replace(set).is_some() {
            shape.push(format!("target {} listed twice", rec.t));
        }
        claimed_sigma[rec.t - 1] = rec.sigma;
    }
    for t in (0..n).filter(|&t| t != s && solutions[t].is_none()) {
        shape.push(format!("target {} missing", t + 1));
    }
    if !rep.push("targets", shape) {
        return rep.finish(level);
    }

    let cost_fields = res
        .targets
        .iter()
        .filter_map(|rec| {
            let sum: i64 = rec.edge_ids.iter().map(|&e| g.edge(e).cost).sum();
            (sum != rec.total_cost).then(|| {
                format!(
                    "target {}: total_cost field {} but edge_ids sum to {sum}",
                    rec.t, rec.total_cost
                )
            })
        })
        .collect();
    rep.push("cost_fields", cost_fields);

    // sigma(t) = min(p, lambda(t)) where under-connected graphs are allowed,
    // p otherwise
    let split = res.vertex_disjoint.then(|| split_vertices(g));
    let expected_sigma: Vec<usize> = if !res.allow_underconnected {
        (0..n).map(|t| if t == s { 0 } else { res.p }).collect()
    } else if let Some(sg) = &split {
        let targets: Vec<VertexId> = (0..n).collect();
        par::map(exec, &targets, |&t| {
            if t == s {
                0
            } else {
                max_disjoint_paths_capped(&sg.graph, sg.v_out(s), sg.v_in(t), res.p)
            }
        })
    } else {
        let caps = check_outconnectivity_with(g, s, res.p, exec);
        (0..n).map(|t| caps.get(&t).copied().unwrap_or(0)).collect()
    };
    let sigma_failures = (0..n)
        .filter(|&t| t != s && claimed_sigma[t] != expected_sigma[t])
        .map(|t| {
            format!(
                "target {}: sigma {} but expected {}",
                t + 1,
                claimed_sigma[t],
                expected_sigma[t]
            )
        })
        .collect();
    rep.push("sigma", sigma_failures);

    let oracle_failures = match &split {
        None => check_levels_against_oracle(g, s, &expected_sigma, &solutions, exec)
            .mismatches
            .iter()
            .map(|mm| {
                format!(
                    "target {}: cost {} but the level-{} optimum is {}",
                    mm.target + 1,
                    show(mm.found),
                    mm.level,
                    show(mm.expected)
                )
            })
            .collect(),
        Some(sg) => {
            let targets: Vec<VertexId> = (0..n).filter(|&t| t != s).collect();
            par::map(exec, &targets, |&t| {
                let k = expected_sigma[t];
                let expected = if k == 0 {
                    Some(0)
                } else {
                    ssp_fast(&sg.graph, sg.v_out(s), sg.v_in(t), k).level(k).map(|l| l.cost)
                };
                let found = solutions[t].as_ref().map(|sol| sol.cost(g));
                (found != expected).then(|| {
                    format!(
                        "target {}: cost {} but the vertex-disjoint level-{k} optimum is {}",
                        t + 1,
                        show(found),
                        show(expected)
                    )
                })
            })
            .into_iter()
            .flatten()
            .collect()
        }
    };
    rep.push("oracle_costs", oracle_failures);

    if level == Level::Costs {
        return rep.finish(level);
    }

    let mut decomposition = Vec::new();
    let mut disjointness = Vec::new();
    for rec in &res.targets {
        let t = rec.t - 1;
        let sol = solutions[t].as_ref().expect("checked above");
        match decompose(g, sol, s, t, rec.sigma, DecomposeMode::Strict) {
            Ok(dec) => {
                let paths: Vec<Vec<usize>> = dec
                    .paths
                    .iter()
                    .map(|p| p.vertices.iter().map(|v| v + 1).collect())
                    .collect();
                if paths != rec.paths {
                    decomposition.push(format!("target {}: paths field differs from the decomposition", rec.t));
                }
                if res.vertex_disjoint && !check_vertex_disjoint(&dec) {
                    disjointness.push(format!("target {}: paths share an internal vertex", rec.t));
                }
            }
            Err(e) => decomposition.push(format!("target {}: {e}", rec.t)),
        }
    }
    rep.push("decomposition", decomposition);
    if res.vertex_disjoint {
        rep.push("vertex_disjoint", disjointness);
    }

    match (res.preserver_kind, &res.preserver_edge_ids) {
        (PreserverKind::Optimal, Some(ids)) => {
            if let Some(&e) = ids.iter().find(|&&e| e >= g.edge_count()) {
                rep.push("preserver_size", vec![format!("edge id {e} out of range")]);
                return rep.finish(level);
            }
            let preserver: EdgeSet = ids.iter().copied().collect();
            let pr = check_preserver_with_degrees(g, s, &expected_sigma, &preserver, Some(&solutions), exec);
            let mut size = Vec::new();
            if preserver.len() != ids.len() {
                size.push("repeated edge ids".to_string());
            }
            if pr.size != pr.expected_size {
                size.push(format!("{} edges, expected {}", pr.size, pr.expected_size));
            }
            size.extend(pr.degree_violations.iter().map(|d| {
                format!(
                    "vertex {}: in-degree {}, expected {}",
                    d.vertex + 1,
                    d.in_degree,
                    d.expected
                )
            }));
            rep.push("preserver_size", size);
            rep.push(
                "preserver_levels",
                pr.level_mismatches
                    .iter()
                    .map(|mm| {
                        format!(
                            "target {} level {}: {} inside the preserver, {} in the graph",
                            mm.target + 1,
                            mm.level,
                            show(mm.found),
                            show(mm.expected)
                        )
                    })
                    .collect(),
            );
            rep.push(
                "containment",
                pr.containment_violations
                    .iter()
                    .map(|t| format!("target {}: solution not inside the preserver", t + 1))
                    .collect(),
            );
        }
        (PreserverKind::Optimal, None) => {
            rep.push("preserver_size", vec!["preserver_kind is optimal but no edge ids given".into()]);
        }
        (kind, _) => rep.notices.push(format!(
            "preserver checks skipped: preserver_kind is {}",
            match kind {
                PreserverKind::UnionCover => "union-cover (not size-optimal)",
                _ => "none",
            }
        )),
    }
    rep.finish(level)
}
