//! Matchings in uniform hypergraphs around the vertex-degree threshold
//! `C(n-1, k-1) - C(n - n/k, k-1)`.
//!
//! The crate bundles the machinery needed to study rainbow and perfect
//! matchings in `k`-graphs and `(1,k)`-partite `(k+1)`-graphs at desk scale:
//!
//! * [`hypergraph`] — canonical edge storage, degrees, matchings, closeness,
//!   good/bad vertices, and the coordinatewise dominance order;
//! * [`constructions`] — the extremal hosts `H_k(n,m)` / `H_k^*(n,m)`, the
//!   color-lift of a family, and seeded threshold-family generators;
//! * [`exact`] — branch-and-bound oracles for maximum, perfect, and rainbow
//!   matchings, plus empirical checkers for the external stability lemma;
//! * [`lp`] — exact-rational simplex for fractional matchings/covers, LP
//!   duality, and the cover-augmented graph with its stability property;
//! * [`absorption`] — absorbing `k(k+1)`-sets, the randomized absorbing
//!   matching, and the absorb step;
//! * [`rounding`] — vertex-sampled subgraphs, multiplicity accounting,
//!   the generalized binomial subgraph, and the semi-random nibble;
//! * [`pipeline`] — the end-to-end close/far solvers and the dispatcher.
//!
//! All decision predicates compare exact rationals; floating point only
//! appears in sampling and in report summaries.

pub mod absorption;
pub mod constructions;
pub mod exact;
pub mod experiment;
pub mod hypergraph;
pub mod io;
pub mod lp;
pub mod num;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod rounding;

pub use hypergraph::{Hypergraph, Matching, MatchingClass, PartiteGraph, Vertex, VertexSet};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("absorption failed: {0}")]
    AbsorptionFailed(String),
    #[error("infeasible linear program: {0}")]
    Infeasible(String),
    #[error("unbounded linear program: {0}")]
    Unbounded(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
