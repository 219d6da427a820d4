//! Single-source shortest `p` edge-disjoint paths and optimal-size
//! `p`-multipath preservers.
//!
//! Given a directed graph with non-negative integer costs, a source `s` and
//! an integer `p`, [`engine::run`] computes in `p` phases, for every target
//! `t`, a set of `p` edge-disjoint `s -> t` paths of minimum total cost, and a
//! subgraph with exactly `p(n-1)` edges that contains one such optimal set for
//! every target.
//!
//! The crate is organised as:
//!
//! * [`graph`], [`lex`], [`io`], [`generate`]: graph representation,
//!   lexicographic path lengths, the text format and random instances.
//! * [`oracle`]: independent reference solvers (successive shortest paths in
//!   two flavours, exhaustive enumeration, unit-capacity max-flow).
//! * [`engine`]: the phase-based preserver construction.
//! * [`transforms`]: dummy-vertex augmentation for graphs that are not
//!   `p`-edge-outconnected, and vertex splitting for vertex-disjoint paths.
//! * [`verify`]: flow decomposition and output audits.
//!
//! Per-target work inside a phase runs on rayon when the `parallel` feature
//! is enabled (the default); without it every [`par::Execution`] falls back
//! to a sequential loop.

pub mod engine;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lex;
pub mod oracle;
pub mod par;
pub mod transforms;
pub mod verify;

pub use engine::{EngineError, EngineOptions, EngineOutput};
pub use graph::{Cost, Digraph, EdgeId, EdgeRecord, EdgeSet, GraphError, OrientedEdge, VertexId};
pub use lex::LexCost;
pub use oracle::FlowSolution;
pub use par::Execution;
