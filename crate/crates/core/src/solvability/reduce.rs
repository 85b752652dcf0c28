//! Pendant and twin reductions, and the driver that composes them with the
//! path and complete-graph solvers.

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::OccupationVector;
use crate::weights::WeightAssignment;

use super::complete::solve_complete;
use super::path::solve_path;
use super::{check_target, round_trip};

/// Weight of a pendant `v′` at `v` that draws `alpha` of the `r_v` visits
/// to `v` into `v′`: `ρ*(v)·α/(r(v) − α)`.
pub fn pendant_weight(rho_star_v: f64, alpha: f64, r_v: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < r_v) {
        return Err(Error::AlphaOutOfRange { alpha, target: r_v });
    }
    Ok(rho_star_v * alpha / (r_v - alpha))
}

/// Attaches a pendant `v′` (id `n`) at `v`. If `w` realises `r − α·e_v` on
/// `g`, the result realises `r` on `g` and `α` at `v′`.
pub fn extend_pendant(
    g: &GraphInstance,
    w: &WeightAssignment,
    v: usize,
    alpha: f64,
    r: &OccupationVector,
) -> Result<(GraphInstance, WeightAssignment)> {
    if r.len() != g.n() {
        return Err(Error::DimensionMismatch(format!("r has {} entries for {} vertices", r.len(), g.n())));
    }
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if v == g.v_out() {
        return Err(Error::InvalidTarget("a pendant at v_out is never visited".into()));
    }
    let rho_new = pendant_weight(w.rho_star()[v], alpha, r[v])?;
    let extended = g.attach_pendant(v)?;
    let mut rho = w.rho().to_vec();
    rho.push(rho_new);
    let w2 = WeightAssignment::new(&extended, rho)?;
    let mut target = r.values.clone();
    target.push(alpha);
    round_trip(&extended, &w2, &OccupationVector::expected(target))?;
    Ok((extended, w2))
}

/// How to recover weights on the original graph from a twin-reduced solution.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinSplit {
    /// Kept twin, as an id in the original graph.
    pub v: usize,
    /// Removed twin, as an id in the original graph.
    pub w: usize,
    /// Share of the merged weight that stays at `v`.
    pub alpha: f64,
    /// Original ids of the reduced graph's vertices, in reduced-id order.
    pub kept: Vec<usize>,
}

impl TwinSplit {
    /// Lifts reduced weights back to the original graph.
    pub fn apply(&self, reduced: &[f64], n: usize) -> Vec<f64> {
        let mut rho = vec![0.0; n];
        for (i, &old) in self.kept.iter().enumerate() {
            rho[old] = reduced[i];
        }
        let merged = rho[self.v];
        rho[self.v] = self.alpha * merged;
        rho[self.w] = (1.0 - self.alpha) * merged;
        rho
    }
}

pub fn are_twins(g: &GraphInstance, v: usize, w: usize) -> bool {
    v != w && !g.adjacent(v, w) && g.neighbors(v) == g.neighbors(w)
}

/// Merges twin `w` into `v`: returns `G − w` and the target with
/// `r′(v) = r(v) + r(w)`.
pub fn reduce_twins(
    g: &GraphInstance,
    r: &OccupationVector,
    v: usize,
    w: usize,
) -> Result<(GraphInstance, OccupationVector, TwinSplit)> {
    check_target(g, r)?;
    for x in [v, w] {
        if x >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: g.n() });
        }
    }
    if [g.v_in(), g.v_out()].iter().any(|t| *t == v || *t == w) || !are_twins(g, v, w) {
        return Err(Error::NotTwins(v, w));
    }
    let total = r[v] + r[w];
    if !(r[v] > 0.0 && r[w] > 0.0) {
        return Err(Error::NotInPsi {
            stage: format!("twins ({v}, {w})"),
            reason: format!("r({v}) = {} and r({w}) = {} must be positive", r[v], r[w]),
        });
    }
    let (reduced, kept) = g.remove_vertex(w)?;
    let values = kept
        .iter()
        .map(|&old| if old == v { total } else { r[old] })
        .collect();
    let split = TwinSplit {
        v,
        w,
        alpha: r[v] / total,
        kept,
    };
    Ok((reduced, OccupationVector::expected(values), split))
}

/// Solves twin reduction, pendants and base cases recursively.
///
/// Pendants (other than `v_in`, `v_out`) are stripped deepest first, then
/// twin pairs are merged, until the remaining graph is a `v_out`–`v_in`
/// path or complete. Every tree reduces to a single edge this way.
pub fn solve_reducible(g: &GraphInstance, r: &OccupationVector) -> Result<WeightAssignment> {
    check_target(g, r)?;
    let w = WeightAssignment::new(g, solve_rec(g, &r.values)?)?;
    round_trip(g, &w, r)?;
    Ok(w)
}

fn solve_rec(g: &GraphInstance, r: &[f64]) -> Result<Vec<f64>> {
    let target = OccupationVector::expected(r.to_vec());
    if g.is_out_in_path() {
        return Ok(solve_path(g, &target)?.rho().to_vec());
    }
    if g.is_complete() {
        return Ok(solve_complete(g, &target)?.rho().to_vec());
    }
    if let Some(p) = deepest_pendant(g) {
        let v = g.neighbors(p)[0];
        let alpha = r[p];
        let stage = format!("pendant {p} at {v}");
        if !(alpha > 0.0) || !(r[v] - alpha > 0.0) {
            return Err(Error::NotInPsi {
                stage,
                reason: format!("need 0 < r({p}) < r({v}), got {alpha} and {}", r[v]),
            });
        }
        let (reduced, kept) = g.remove_vertex(p)?;
        let sub_r: Vec<f64> = kept.iter().map(|&old| if old == v { r[v] - alpha } else { r[old] }).collect();
        let sub_rho = solve_rec(&reduced, &sub_r).map_err(|e| tag_stage(e, &stage))?;
        let sub_w = WeightAssignment::new(&reduced, sub_rho)?;
        let v_new = kept.iter().position(|&old| old == v).unwrap();
        let mut rho = vec![0.0; g.n()];
        for (i, &old) in kept.iter().enumerate() {
            rho[old] = sub_w.rho()[i];
        }
        rho[p] = pendant_weight(sub_w.rho_star()[v_new], alpha, r[v])?;
        return Ok(rho);
    }
    if let Some((v, w)) = find_twins(g) {
        let (reduced, sub_r, split) = reduce_twins(g, &OccupationVector::expected(r.to_vec()), v, w)?;
        let sub_rho = solve_rec(&reduced, &sub_r.values).map_err(|e| tag_stage(e, &format!("twins ({v}, {w})")))?;
        return Ok(split.apply(&sub_rho, g.n()));
    }
    Err(Error::Irreducible)
}

fn tag_stage(e: Error, outer: &str) -> Error {
    match e {
        Error::NotInPsi { stage, reason } => Error::NotInPsi {
            stage: format!("{outer} > {stage}"),
            reason,
        },
        other => other,
    }
}

fn deepest_pendant(g: &GraphInstance) -> Option<usize> {
    let dist = g.distances_to_out();
    (0..g.n())
        .filter(|&v| g.degree(v) == 1 && v != g.v_in() && v != g.v_out())
        .max_by(|&a, &b| dist[a].cmp(&dist[b]).then(b.cmp(&a)))
}

fn find_twins(g: &GraphInstance) -> Option<(usize, usize)> {
    let inner: Vec<usize> = (0..g.n()).filter(|&v| v != g.v_in() && v != g.v_out()).collect();
    for (k, &v) in inner.iter().enumerate() {
        for &w in &inner[k + 1..] {
            if are_twins(g, v, w) {
                return Some((v, w));
            }
        }
    }
    None
}
