//! Executable local message-passing protocols on graphs under per-processor
//! memory budgets.
//!
//! Processors sit either on the vertices (node protocols) or on the edges
//! (edge protocols) of an undirected graph. Inputs live on the edges, states
//! are fixed-width bit strings (bounded mode) or structured values (unbounded
//! mode), and a protocol runs for a fixed number of synchronous rounds. On top
//! of the engine this crate ships:
//!
//! - graph families with canonical edge indexing ([`graph`]),
//! - MAP inference for the four-potential class on hub-path graphs, by brute
//!   force, by dynamic programming, and by an explicit 3-round/4-bit edge
//!   protocol ([`map`]),
//! - information-flow lower-bound certificates obtained by enumerating input
//!   completions behind a bottleneck vertex set ([`certify`]),
//! - the counting, duplicate-detection and mirrored-disjointness tasks with
//!   their protocols ([`tasks`]),
//! - belief propagation and exact marginal oracles for Ising models on trees,
//!   plus seeded dataset generation ([`ising`]),
//! - residual GCN forward passes over graphs and line graphs, plus the planted
//!   star-graph regression dataset ([`gcn`]),
//! - the acceptance checks wired into the `verify` CLI subcommand ([`verify`]).

mod error;

pub mod certify;
pub mod gcn;
pub mod graph;
pub mod ising;
pub mod json;
pub mod manifest;
pub mod map;
pub mod protocol;
pub mod rng;
pub mod tasks;
pub mod verify;

pub use error::{Error, ProcessorId, Result};
pub use graph::{Graph, GraphFamily};
