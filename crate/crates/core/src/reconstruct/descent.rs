//! Steepest descent on `ϑ` from uniform weights, restricted to the support of
//! the target, with `ρ(v_out)` pinned at 1.

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::OccupationVector;
use crate::weights::WeightAssignment;

use super::gradient::{analytic_gradient, finite_difference_gradient, free_vertices, unchecked_cost, validate_target};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    Fixed { eta: f64 },
    /// Armijo backtracking starting from `eta0`. Later trial steps use the
    /// Barzilai-Borwein length `sᵀs / sᵀy` of the previous iterate change,
    /// falling back to `accepted / shrink` when curvature is not positive.
    Backtracking { eta0: f64, shrink: f64, armijo_c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionConfig {
    pub max_iters: usize,
    pub cost_tol: f64,
    pub step_rule: StepRule,
    pub positivity_floor: f64,
    pub gradient_mode: GradientMode,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            cost_tol: 1e-12,
            step_rule: StepRule::Backtracking {
                eta0: 0.1,
                shrink: 0.5,
                armijo_c: 1e-4,
            },
            positivity_floor: 1e-8,
            gradient_mode: GradientMode::Analytic,
        }
    }
}

impl ReconstructionConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Format(format!("invalid reconstruction config: {m}")));
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.cost_tol > 0.0) {
            return bad("cost_tol must be positive");
        }
        if !(self.positivity_floor > 0.0) {
            return bad("positivity_floor must be positive");
        }
        match self.step_rule {
            StepRule::Fixed { eta } if !(eta > 0.0) => bad("eta must be positive"),
            StepRule::Backtracking { eta0, shrink, armijo_c }
                if !(eta0 > 0.0) || !(shrink > 0.0 && shrink < 1.0) || !(armijo_c > 0.0 && armijo_c < 1.0) =>
            {
                bad("backtracking needs eta0 > 0, shrink and armijo_c in (0, 1)")
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    pub cost: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// Induced subgraph on the support of the target.
    pub graph: GraphInstance,
    /// Original ids of the support vertices, in subgraph order.
    pub kept: Vec<usize>,
    pub weights: WeightAssignment,
    pub cost: f64,
    pub status: Status,
    pub log: Vec<IterRecord>,
    /// Number of coordinate projections onto the positivity floor.
    pub floor_hits: usize,
}

impl Reconstruction {
    /// Weights indexed by original vertex id; `None` off the support.
    pub fn full_rho(&self, n: usize) -> Vec<Option<f64>> {
        let mut out = vec![None; n];
        for (i, &v) in self.kept.iter().enumerate() {
            out[v] = Some(self.weights.rho()[i]);
        }
        out
    }
}

/// Fits weights to `τ̂` by steepest descent from `ρ ≡ 1`.
pub fn reconstruct_weights(g: &GraphInstance, tau_hat: &OccupationVector, cfg: &ReconstructionConfig) -> Result<Reconstruction> {
    cfg.validate()?;
    let kept = validate_target(g, tau_hat)?;
    let sub = g.induced(&kept)?;
    let target: Vec<f64> = kept.iter().map(|&v| tau_hat[v]).collect();
    let free = free_vertices(&sub);

    let mut weights = WeightAssignment::uniform(&sub);
    let mut cost = unchecked_cost(&sub, &weights, &target)?;
    let mut log = vec![IterRecord { iter: 0, cost, step: 0.0 }];
    let mut floor_hits = 0;
    let mut trial = match cfg.step_rule {
        StepRule::Fixed { eta } => eta,
        StepRule::Backtracking { eta0, .. } => eta0,
    };

    let project = |rho: &[f64], grad: &[f64], step: f64, hits: &mut usize| -> Vec<f64> {
        let mut next = rho.to_vec();
        for (k, &x) in free.iter().enumerate() {
            let v = rho[x] - step * grad[k];
            next[x] = if v < cfg.positivity_floor {
                *hits += 1;
                cfg.positivity_floor
            } else {
                v
            };
        }
        next
    };

    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    for iter in 1..=cfg.max_iters {
        if cost <= cfg.cost_tol {
            break;
        }
        let grad = match cfg.gradient_mode {
            GradientMode::Analytic => analytic_gradient(&sub, &weights, &target)?.gradient,
            GradientMode::FiniteDifference => finite_difference_gradient(&sub, &weights, &target)?,
        };
        let rho = weights.rho().to_vec();
        if let (Some((p_rho, p_grad)), StepRule::Backtracking { eta0, .. }) = (&prev, cfg.step_rule) {
            let (mut ss, mut sy) = (0.0, 0.0);
            for (k, &x) in free.iter().enumerate() {
                let s = rho[x] - p_rho[x];
                ss += s * s;
                sy += s * (grad[k] - p_grad[k]);
            }
            if sy > 0.0 && ss > 0.0 {
                trial = (ss / sy).clamp(eta0 * 1e-12, eta0 * 1e6);
            }
        }
        match cfg.step_rule {
            StepRule::Fixed { eta } => {
                let next = project(&rho, &grad, eta, &mut floor_hits);
                weights = WeightAssignment::new(&sub, next)?;
                cost = unchecked_cost(&sub, &weights, &target)?;
                log.push(IterRecord { iter, cost, step: eta });
            }
            StepRule::Backtracking { eta0, shrink, armijo_c } => {
                let mut step = trial;
                loop {
                    let mut hits = 0;
                    let next = project(&rho, &grad, step, &mut hits);
                    let decrease: f64 = free.iter().enumerate().map(|(k, &x)| grad[k] * (rho[x] - next[x])).sum();
                    let candidate = WeightAssignment::new(&sub, next)?;
                    let c = unchecked_cost(&sub, &candidate, &target)?;
                    if c.is_finite() && decrease > 0.0 && c <= cost - armijo_c * decrease {
                        floor_hits += hits;
                        weights = candidate;
                        cost = c;
                        break;
                    }
                    step *= shrink;
                    if step < f64::EPSILON * eta0 * 1e-10 {
                        return Err(Error::NoDescent { iter, cost });
                    }
                }
                log.push(IterRecord { iter, cost, step });
                trial = (step / shrink).min(eta0 * 1e6);
                prev = Some((rho, grad));
            }
        }
    }

    let status = if cost <= cfg.cost_tol { Status::Converged } else { Status::MaxIters };
    Ok(Reconstruction {
        graph: sub,
        kept,
        weights,
        cost,
        status,
        log,
        floor_hits,
    })
}
