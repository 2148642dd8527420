//! A laboratory for list colouring and DP (correspondence) colouring of
//! graphs whose list assignments or covers are triangle-free or `K_r`-free.
//!
//! The crate provides:
//!
//! * [`graph`]: simple graphs, neighbourhoods, distances, clique search and
//!   instance generators.
//! * [`lists`]: list assignments, partial colourings, residual lists,
//!   subassignments and the `F`-free / Reed finishing predicates.
//! * [`lottery`]: the coupon-collector lottery with blank coupons, its exact
//!   enumeration, Monte Carlo tail checks and the Chernoff / local lemma
//!   toolkit.
//! * [`cover`]: covers and their conflict graphs `H` and `H*`.
//! * [`sampler`]: exact counting, rank/unrank and uniform sampling of
//!   partial colourings and independent sets, conditional-uniformity sweeps,
//!   and the neighbourhood resampling chain.
//! * [`solver`]: bad-event detectors, resampling solvers, independent
//!   transversal search, greedy completion and the exhaustive oracle.
//! * [`shearer`]: independent-set count bounds for `K_r`-free graphs.
//!
//! Colour `0` is the blank everywhere: it means "uncoloured" in a partial
//! colouring and "missed" in a lottery, and never appears inside a list.

pub mod cover;
pub mod graph;
pub mod instances;
pub mod lists;
pub mod lottery;
pub mod rng;
pub mod sampler;
pub mod shearer;
pub mod solver;

use thiserror::Error;

pub use cover::{Cover, CoverVertex};
pub use graph::{Graph, Subgraph, Vertex, VertexSet};
pub use lists::{Colour, ListAssignment, PartialColouring, BLANK};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Enumeration guard shared by every exact oracle.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("colour 0 is the blank and cannot appear in a list (vertex {0})")]
    BlankInList(usize),
    #[error("colour 0 is not a valid query colour")]
    BlankColour,
    #[error("list assignment has {got} lists but the graph has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("not a partial colouring: {0}")]
    NotPartialColouring(String),
    #[error("list at vertex {0} is not contained in the parent list")]
    NotSubassignment(usize),
    #[error("not an independent set: {0}")]
    NotIndependent(String),
    #[error("{what}: {count} exceeds the enumeration limit {limit}")]
    TooLarge { what: &'static str, count: u128, limit: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid cover: {0:?}")]
    InvalidCover(Vec<cover::CoverViolation>),
    #[error("lottery precondition failed: m = {m} > (1 - eps) n log n = {threshold:.4}")]
    LotteryPrecondition { m: usize, threshold: f64 },
    #[error("vertex {0} has an empty list")]
    EmptyList(usize),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}
