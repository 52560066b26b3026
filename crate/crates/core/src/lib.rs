//! Recovery of complete label distributions from hidden-label observations.
//!
//! An annotator who omits some labels implicitly spreads their mass over the
//! labels they kept, so every observed row is the ground-truth row restricted
//! to its observed positions and renormalized. This crate recovers the full
//! matrix with a graph-regularized, trace-norm-penalized ADMM solver that
//! keeps each recovered row proportional to its observation on the observed
//! positions.
//!
//! The pieces, in pipeline order:
//!
//! - [`data`]: datasets, masks, the hidden observation and CSV I/O
//! - [`graph`]: KNN similarity graph and its Laplacian
//! - [`solver`]: the ADMM loop and its individual steps
//! - [`metrics`] and [`stats`]: the five LDL measures and a paired t-test
//! - [`predictor`]: a softmax-linear model for the predictive setting
//! - [`experiments`]: seeded, reproducible experiment runs and reports
//! - [`synthetic`]: low-rank synthetic datasets

// `!(x > 0.0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod metrics;
pub mod predictor;
pub mod solver;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
