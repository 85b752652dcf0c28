//! Exact solver for complete graphs.
//!
//! With weights `β` normalised to `Σβ = 1`, `β₁` at `v_out` and `β₂` at
//! `v_in`, the occupation vector is `r₂ = (1 + β₂/β₁)(1 − β₂)` and
//! `rⱼ = βⱼ(1 − βⱼ)/β₁` for `j ≥ 3`. Inversion reduces to one equation in
//! `β₁`, solved by bisection.

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::OccupationVector;
use crate::weights::WeightAssignment;

use super::{check_target, round_trip};

const MAX_BISECTIONS: usize = 200;

/// Occupation vector of `K_n` for simplex weights `beta`, by the closed forms.
pub fn complete_occupation(g: &GraphInstance, beta: &[f64]) -> Vec<f64> {
    let (o, i) = (g.v_out(), g.v_in());
    let b1 = beta[o];
    (0..g.n())
        .map(|v| {
            if v == o {
                1.0
            } else if v == i {
                (1.0 + beta[i] / b1) * (1.0 - beta[i])
            } else {
                beta[v] * (1.0 - beta[v]) / b1
            }
        })
        .collect()
}

fn not_in_psi(reason: String) -> Error {
    Error::NotInPsi {
        stage: "complete".into(),
        reason,
    }
}

/// `u = 1 − √(1 − 4rb)` without cancellation.
fn u_minus(r: f64, b: f64) -> f64 {
    let x = 4.0 * r * b;
    x / (1.0 + (1.0 - x).max(0.0).sqrt())
}

struct Inversion<'a> {
    /// `rⱼ` for the vertices other than the terminals.
    others: &'a [f64],
    /// Index into `others` of the largest value.
    top: usize,
    r2: f64,
}

impl Inversion<'_> {
    /// `βⱼ` for `j ≥ 3` at `β₁ = b`; on the `plus` branch the top index takes
    /// the root above `1/2`.
    fn betas(&self, b: f64, plus: bool) -> Vec<f64> {
        self.others
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                let half_u = u_minus(r, b) / 2.0;
                if plus && k == self.top {
                    1.0 - half_u
                } else {
                    half_u
                }
            })
            .collect()
    }

    /// `(1 − S)(b + S)/b − r₂` with `S = Σ_{j≥3} βⱼ`, which equals
    /// `(1 + β₂/b)(1 − β₂) − r₂` once `β₂ = 1 − b − S`.
    fn residual(&self, b: f64, plus: bool) -> f64 {
        let s: f64 = self.betas(b, plus).iter().sum();
        (1.0 - s) * (b + s) / b - self.r2
    }
}

/// Bisects on `(0, hi]` for a sign change, given the sign of the residual
/// as `b → 0⁺`.
fn bisect<F: Fn(f64) -> f64>(f: F, hi: f64, positive_at_zero: bool) -> f64 {
    let (mut lo, mut hi) = (0.0f64, hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == positive_at_zero {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Simplex weights solving the closed forms for `r`, indexed by vertex.
pub fn complete_betas(g: &GraphInstance, r: &OccupationVector) -> Result<Vec<f64>> {
    check_target(g, r)?;
    if !g.is_complete() {
        return Err(Error::Format("graph is not complete".into()));
    }
    let (o, i) = (g.v_out(), g.v_in());
    if g.n() == 2 {
        if (r[i] - 1.0).abs() > 1e-9 {
            return Err(not_in_psi(format!("single edge requires r(v_in) = 1, got {}", r[i])));
        }
        return Ok(vec![0.5, 0.5]);
    }
    let ids: Vec<usize> = (0..g.n()).filter(|&v| v != o && v != i).collect();
    let others: Vec<f64> = ids.iter().map(|&v| r[v]).collect();
    if let Some(v) = others.iter().position(|&x| !(x > 0.0)) {
        return Err(not_in_psi(format!("r({}) = {} is not positive", ids[v], others[v])));
    }
    let top = (0..others.len())
        .max_by(|&a, &b| others[a].total_cmp(&others[b]).then(b.cmp(&a)))
        .unwrap();
    let r3 = others[top];
    let total: f64 = others.iter().sum();
    let rest = total - r3;
    let r2 = r[i];
    if !(r3 - rest < r2) || !(r2 < 1.0 + total) {
        return Err(not_in_psi(format!(
            "need {} < r(v_in) < {}, got {r2}",
            r3 - rest,
            1.0 + total
        )));
    }

    let inv = Inversion {
        others: &others,
        top,
        r2,
    };
    let b_max = 1.0 / (4.0 * r3);
    // At b → 0⁺ the minus branch tends to 1 + Σr − r₂ > 0 and the plus branch
    // to r₃ − Σ_{j>3} r − r₂ < 0. Both meet at b_max.
    let at_max = inv.residual(b_max, false);
    let plus = at_max > 0.0;
    let b = if at_max == 0.0 {
        b_max
    } else if plus {
        bisect(|b| inv.residual(b, true), b_max, false)
    } else {
        bisect(|b| inv.residual(b, false), b_max, true)
    };
    let rest_betas = inv.betas(b, plus);
    let b2 = 1.0 - b - rest_betas.iter().sum::<f64>();
    let mut beta = vec![0.0; g.n()];
    beta[o] = b;
    beta[i] = b2;
    for (&v, &x) in ids.iter().zip(&rest_betas) {
        beta[v] = x;
    }
    if let Some(v) = beta.iter().position(|&x| !(x > 0.0)) {
        let res = inv.residual(b, plus);
        if res.abs() > 1e-6 * r2.max(1.0) {
            return Err(Error::BracketFailure {
                lo: inv.residual(f64::MIN_POSITIVE, plus),
                hi: at_max,
            });
        }
        return Err(not_in_psi(format!("root gives beta({v}) = {}", beta[v])));
    }
    Ok(beta)
}

/// Solves `K_n` exactly; the result is scaled so that `ρ(v_out) = 1`.
pub fn solve_complete(g: &GraphInstance, r: &OccupationVector) -> Result<WeightAssignment> {
    let beta = complete_betas(g, r)?;
    let b1 = beta[g.v_out()];
    let w = WeightAssignment::new(g, beta.iter().map(|x| x / b1).collect())?;
    round_trip(g, &w, r)?;
    Ok(w)
}
