//! Counting nearly-equal distances in separated planar point sets.
//!
//! A set of points in the plane is *separated* when every pair is at
//! distance at least 1. Given sorted distance values `t_1 < ... < t_k` and a
//! width `alpha`, this crate counts the pairs whose distance lands in
//! `[t_l, t_l + alpha]` for some `l`, checks the additivity condition on the
//! `t_l` that guarantees at most `n^2/4 + C n` such pairs, builds the known
//! extremal column constructions with exact predicted counts, searches for
//! good configurations by simulated annealing, and extracts `K(1, s, s)`
//! witnesses with label-homogeneous refinements from the resulting graph.

pub mod constructions;
pub mod count;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod hypothesis;
pub mod io;
pub mod search;
pub mod verify;

pub use constructions::{
    emp1_chain, problem3_chain, random_separated, remark2_three_column, two_column,
    ConstructionName, ConstructionOutput,
};
pub use count::{count_pairs, label_pairs, CountMethod, LabeledPair, PairCountReport};
pub use error::{Error, Result};
pub use geometry::{diameter, min_pairwise_distance, IntervalFamily, Point, PointSet};
pub use graph::{
    build_graph, case1_angle_diagnostic, classify_case, find_tripartite, homogenize,
    proof_constants, AngleDiagnostic, Case, HomogeneousWitness, NearEqualGraph, ProofConstants,
    TripartiteWitness,
};
pub use hypothesis::{check_hypothesis, HypothesisReport, Violation};
pub use search::{anneal, local_opt_check, SearchConfig, SearchResult};
pub use verify::{verify_theorem, VerifierReport};
