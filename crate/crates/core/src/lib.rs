//! Occupation times of random walks on vertex-weighted graphs.
//!
//! A walk starts at `v_in`, steps to a neighbour `y` of `x` with probability
//! proportional to `ρ(y)`, and stops at `v_out`. The crate computes the
//! expected number of visits to each vertex, estimates it by simulation,
//! recovers weights from observed visit counts, and decides which visit
//! vectors are exactly attainable.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod occupation;
pub mod reconstruct;
pub mod solvability;
pub mod spectral;
pub mod walk;
pub mod weights;

pub use error::{Error, Result};
pub use graph::GraphInstance;
pub use occupation::OccupationVector;
pub use weights::WeightAssignment;
