//! Exact analysis of present-biased agents traversing weighted task DAGs.
//!
//! An agent with present-bias factor `beta` walks a task graph from a source
//! to a target. At every vertex it evaluates the remaining paths with the
//! first edge at full weight and everything after discounted by `beta`, then
//! picks one of the minimum-perceived-cost first edges at random according to
//! a transition policy. The traversal cost is a discrete random variable; this
//! crate computes its law, extremes, and moments exactly with big-rational
//! arithmetic, and ships generators for the gadget families that make those
//! quantities interesting (exponential branch chains, partition diamonds,
//! k-sum gadgets, procrastination chains).

pub mod bias;
pub mod cli;
pub mod distribution;
pub mod generators;
pub mod graph;
pub mod moments;
pub mod rational;
pub mod structural;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("cycle detected")]
    Cycle,
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("computation cap exceeded: {0}")]
    CapExceeded(String),
    #[error("zero optimal distance: {0}")]
    ZeroOptimalDistance(String),
    #[error("generator error: {0}")]
    Generator(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
