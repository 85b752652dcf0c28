//! Affine hull of proper-walk traces and relative-interior membership.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::OccupationVector;

use super::traces::{distinct_traces, stream_traces};

/// Default enumeration cap, `4n` steps.
pub fn default_cap(g: &GraphInstance) -> usize {
    4 * g.n()
}

/// Largest possible hull dimension: every trace has `tr(v_out) = 1`, and on
/// a bipartite graph `c·tr` is constant as well.
pub fn max_hull_dimension(g: &GraphInstance) -> usize {
    if g.is_bipartite() {
        g.n() - 2
    } else {
        g.n() - 1
    }
}

/// Orthonormal basis of an affine span, grown one point at a time.
#[derive(Debug, Clone)]
struct AffineSpan {
    origin: Option<Vec<f64>>,
    basis: Vec<Vec<f64>>,
}

impl AffineSpan {
    fn new() -> Self {
        Self {
            origin: None,
            basis: Vec::new(),
        }
    }

    fn with_origin(origin: Vec<f64>) -> Self {
        Self {
            origin: Some(origin),
            basis: Vec::new(),
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Component of `p − origin` orthogonal to the current basis.
    fn residual(&self, p: &[f64]) -> Vec<f64> {
        let origin = self.origin.as_ref().expect("origin set");
        let mut d: Vec<f64> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &self.basis {
                let c = dot(&d, q);
                d.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        d
    }

    /// Adds `p`; returns whether the dimension grew.
    fn add(&mut self, p: &[f64]) -> bool {
        if self.origin.is_none() {
            self.origin = Some(p.to_vec());
            return false;
        }
        let scale = p.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let d = self.residual(p);
        let norm = dot(&d, &d).sqrt();
        if norm <= 1e-9 * scale {
            return false;
        }
        self.basis.push(d.into_iter().map(|x| x / norm).collect());
        true
    }

    fn coordinates(&self, p: &[f64]) -> Vec<f64> {
        let origin = self.origin.as_ref().expect("origin set");
        let d: Vec<f64> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
        self.basis.iter().map(|q| dot(&d, q)).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Distinct traces of proper walks up to a cap, with their affine dimension.
#[derive(Debug, Clone)]
pub struct TraceHull {
    pub generators: Vec<Vec<u32>>,
    pub affine_dimension: usize,
    pub bipartite: bool,
    pub cap: usize,
}

impl TraceHull {
    pub fn build(g: &GraphInstance, cap: usize) -> Result<Self> {
        let generators = distinct_traces(g, cap)?;
        let mut span = AffineSpan::new();
        for t in &generators {
            span.add(&as_f64(t));
        }
        Ok(Self {
            generators,
            affine_dimension: span.dim(),
            bipartite: g.is_bipartite(),
            cap,
        })
    }

    /// Whether the dimension reached its largest possible value.
    pub fn is_saturated(&self, g: &GraphInstance) -> bool {
        self.affine_dimension == max_hull_dimension(g)
    }
}

fn as_f64(t: &[u32]) -> Vec<f64> {
    t.iter().map(|&c| c as f64).collect()
}

/// Affine dimension of the traces of proper walks with at most `cap` steps.
/// Enumeration stops as soon as the dimension reaches `n − 1`.
pub fn hull_dimension(g: &GraphInstance, cap: usize) -> Result<usize> {
    let top = g.n() - 1;
    let mut span = AffineSpan::new();
    stream_traces(g, cap, |t| {
        let p: Vec<f64> = t.iter().map(|&c| c as f64).collect();
        span.add(&p);
        span.dim() < top
    })?;
    Ok(span.dim())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    /// A strictly positive convex combination of the traces exists.
    Interior,
    /// In the hull but only with some zero coefficient.
    Boundary,
    /// Not a convex combination of the traces.
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelintReport {
    pub membership: Membership,
    pub cap_used: usize,
    pub generators: usize,
    pub hull_dim: usize,
    /// Distance from `r` to the affine span of the traces.
    pub span_residual: f64,
    /// Largest achievable minimum coefficient over all traces; positive
    /// exactly for interior points.
    pub min_coefficient: Option<f64>,
}

impl RelintReport {
    pub fn is_member(&self) -> bool {
        self.membership == Membership::Interior
    }
}

/// Tolerance on the LP slack below which a point is reported as boundary.
pub const INTERIOR_TOL: f64 = 1e-9;

/// Decides whether `r` is a strictly positive convex combination of the
/// traces of proper walks with at most `cap` steps.
///
/// Truncation can only shrink the hull, so a positive answer is final. A
/// negative one is retried once at `2·cap`, unless `r` is already off an
/// affine span of full dimension.
pub fn relint_membership(g: &GraphInstance, r: &OccupationVector, cap: usize) -> Result<RelintReport> {
    if r.len() != g.n() {
        return Err(Error::DimensionMismatch(format!("r has {} entries for {} vertices", r.len(), g.n())));
    }
    if r.values.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidTarget("r has non-finite entries".into()));
    }
    if (r[g.v_out()] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidTarget(format!("r(v_out) = {}, expected 1", r[g.v_out()])));
    }
    let first = relint_at(g, r, cap)?;
    let final_off_span = first.membership == Membership::Outside
        && first.min_coefficient.is_none()
        && first.hull_dim == max_hull_dimension(g);
    if first.is_member() || final_off_span {
        return Ok(first);
    }
    relint_at(g, r, 2 * cap)
}

fn relint_at(g: &GraphInstance, r: &OccupationVector, cap: usize) -> Result<RelintReport> {
    let hull = TraceHull::build(g, cap)?;
    let m = hull.generators.len();
    let n = g.n();
    let points: Vec<Vec<f64>> = hull.generators.iter().map(|t| as_f64(t)).collect();
    let mut centroid = vec![0.0; n];
    for p in &points {
        centroid.iter_mut().zip(p).for_each(|(c, x)| *c += x / m as f64);
    }
    let mut span = AffineSpan::with_origin(centroid);
    for p in &points {
        span.add(p);
    }
    let d = span.dim();
    let residual = span.residual(&r.values);
    let span_residual = dot(&residual, &residual).sqrt();
    let scale = r.values.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let mut report = RelintReport {
        membership: Membership::Outside,
        cap_used: cap,
        generators: m,
        hull_dim: d,
        span_residual,
        min_coefficient: None,
    };
    if span_residual > 1e-9 * scale {
        return Ok(report);
    }

    // λ_ω = μ_ω + s/m with μ, s ≥ 0 and Σλ = 1. In centred coordinates the
    // s/m part contributes nothing, so Σ μ_ω c_ω = c_r and Σμ + s = 1.
    let target = span.coordinates(&r.values);
    let coords: Vec<Vec<f64>> = points.iter().map(|p| span.coordinates(p)).collect();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let mu: Vec<_> = (0..m).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let s = lp.add_var(1.0, (0.0, 1.0));
    for k in 0..d {
        let row: Vec<_> = mu.iter().zip(&coords).map(|(&v, c)| (v, c[k])).collect();
        lp.add_constraint(row.as_slice(), ComparisonOp::Eq, target[k]);
    }
    let mut total: Vec<_> = mu.iter().map(|&v| (v, 1.0)).collect();
    total.push((s, 1.0));
    lp.add_constraint(total.as_slice(), ComparisonOp::Eq, 1.0);

    let solution = match lp.solve() {
        Ok(outcome) => outcome
            .into_solution()
            .map_err(|e| Error::LinearProgram(format!("{:?}", e.termination_reason())))?,
        Err(microlp::Error::Infeasible) => {
            report.min_coefficient = Some(f64::NEG_INFINITY);
            return Ok(report);
        }
        Err(e) => return Err(Error::LinearProgram(e.to_string())),
    };
    let slack = solution.var_value(s);
    report.min_coefficient = Some(slack / m as f64);
    report.membership = if slack > INTERIOR_TOL {
        Membership::Interior
    } else {
        Membership::Boundary
    };
    Ok(report)
}
