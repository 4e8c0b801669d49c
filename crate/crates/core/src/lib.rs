//! Dissimilar shortest paths: find `k` shortest s–t paths whose arc sets
//! pairwise differ in at least `d` arcs.
//!
//! [`solver::solve`] is the entry point. [`oracle`] holds exhaustive
//! reference implementations used for testing and small inputs.

pub mod colorcode;
pub mod farthest;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod solver;

pub use graph::{build_sp_dag, hamming_distance, parse_graph, ArcWeightedDigraph, GraphError, Path, SpDag};
pub use solver::{solve, verify_certificate, Certificate, Decision, SolveConfig, SolveError, SolveMode};
