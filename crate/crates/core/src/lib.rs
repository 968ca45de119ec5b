//! Minimum dominating set toolkit.
//!
//! The crate is organised around an immutable [`Graph`] and a [`VertexSet`]
//! that keeps insertion order (pruning scans depend on it). On top of those:
//!
//! * [`exact`]: branch-and-bound solver and enumeration of distinct optima,
//! * [`heuristics`]: greedy construction loop, greedy/random/map scorers, pruning,
//! * [`gcn`]: forward pass producing per-vertex probability maps,
//! * [`ig`]: iterated greedy with classic or map-cycling reconstruction,
//! * [`dataset`]: labeled instance generation and storage,
//! * [`bench`]: per-method runs and CSV/summary reporting.

pub mod bench;
pub mod dataset;
mod error;
pub mod exact;
pub mod gcn;
pub mod generate;
pub mod graph;
pub mod heuristics;
pub mod ig;
pub mod io;

pub use error::{Error, Result};
pub use exact::{brute_force_gamma, enumerate_optima, solve_exact, Budget, ExactResult};
pub use gcn::{forward, GcnWeights, ProbabilityMaps};
pub use generate::{generate_ba, generate_er};
pub use graph::{closed_neighborhood, is_dominating, Graph, GraphStats, VertexSet};
pub use heuristics::{construct, construct_from_maps, greedy_score, prune, Heuristic};
pub use ig::{run_ig, IgConfig, IgMode, IgTrace};
