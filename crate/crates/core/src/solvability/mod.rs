//! Which occupation vectors are exactly attainable, and exact solvers for
//! the graphs where the answer is known.

mod complete;
mod hull;
mod path;
mod reduce;
mod traces;

pub use complete::{complete_betas, complete_occupation, solve_complete};
pub use hull::{
    default_cap, hull_dimension, max_hull_dimension, relint_membership, Membership, RelintReport, TraceHull, INTERIOR_TOL,
};
pub use path::{path_decompose, path_weights, solve_path, PathDecomposition};
pub use reduce::{are_twins, extend_pendant, pendant_weight, reduce_twins, solve_reducible, TwinSplit};
pub use traces::{distinct_traces, enumerate_proper_walks, shortest_proper_walk, trace_vector};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::{expected_occupation_fixed_point, OccupationVector};
use crate::weights::WeightAssignment;

/// Entrywise tolerance of the round-trip check, relative to `max(1, |r(v)|)`.
pub const ROUND_TRIP_TOL: f64 = 1e-8;

fn check_target(g: &GraphInstance, r: &OccupationVector) -> Result<()> {
    g.require_out_removal_connected()?;
    if r.len() != g.n() {
        return Err(Error::DimensionMismatch(format!("r has {} entries for {} vertices", r.len(), g.n())));
    }
    if let Some(v) = r.values.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidTarget(format!("r({v}) is not finite")));
    }
    if (r[g.v_out()] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidTarget(format!("r(v_out) = {}, expected 1", r[g.v_out()])));
    }
    Ok(())
}

/// Largest entrywise deviation of the forward map of `w` from `r`, each
/// scaled by `max(1, |r(v)|)`.
pub fn round_trip_error(g: &GraphInstance, w: &WeightAssignment, r: &OccupationVector) -> Result<f64> {
    let tau = expected_occupation_fixed_point(g, w)?;
    Ok(tau
        .values
        .iter()
        .zip(&r.values)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max))
}

fn round_trip(g: &GraphInstance, w: &WeightAssignment, r: &OccupationVector) -> Result<()> {
    let err = round_trip_error(g, w, r)?;
    if !(err <= ROUND_TRIP_TOL) {
        return Err(Error::RoundTrip(err));
    }
    Ok(())
}
