//! JSON documents written by `solve` and `verify`.
//!
//! Vertices are 1-based, matching the graph file; edge ids are 0-based
//! positions of the `a` lines.

use clap::ValueEnum;
use multipath::{Cost, EdgeId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Engine,
    SspBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreserverKind {
    /// Engine preserver: optimal size.
    Optimal,
    /// Union of per-target solutions; a valid cover but not size-optimal.
    UnionCover,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub n: usize,
    pub m: usize,
    pub source: usize,
    pub p: usize,
    pub mode: Mode,
    pub vertex_disjoint: bool,
    pub allow_underconnected: bool,
    pub targets: Vec<TargetRecord>,
    pub preserver_kind: PreserverKind,
    pub preserver_edge_ids: Option<Vec<EdgeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediate: Option<Vec<PhaseRecord>>,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub t: usize,
    pub sigma: usize,
    pub total_cost: Cost,
    pub paths: Vec<Vec<usize>>,
    pub edge_ids: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: usize,
    pub preserver_edge_ids: Vec<EdgeId>,
    pub solutions: Vec<PhaseSolution>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSolution {
    pub t: usize,
    pub edge_ids: Vec<EdgeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub phases: Vec<PhaseTime>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTime {
    pub phase: usize,
    pub prep_ms: f64,
    pub main_loop_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Costs,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub notices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}
