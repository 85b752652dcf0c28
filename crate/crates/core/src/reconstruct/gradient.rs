//! Cost `ϑ(ρ) = ‖τ̂ − τ_ρ‖²` and its gradient in the weights.
//!
//! The analytic gradient differentiates the Green's-function expression for
//! `τ_ρ`. The derivative of `𝒢` comes from the pseudoinverse-derivative
//! identity applied to `𝒢 = ℒ⁺`, with the null projector `P = φ₀φ₀*`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::generate;
use crate::graph::GraphInstance;
use crate::occupation::{expected_occupation_fixed_point, OccupationVector};
use crate::spectral::{pseudoinverse_derivative, SpectralData};
use crate::weights::WeightAssignment;

/// Checks that `τ̂` can serve as a target on `g`: one finite nonnegative
/// entry per vertex, `τ̂(v_out) = 1`, and a support that contains both
/// terminals and induces a connected subgraph.
pub fn validate_target(g: &GraphInstance, tau_hat: &OccupationVector) -> Result<Vec<usize>> {
    if tau_hat.len() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "target has {} entries for {} vertices",
            tau_hat.len(),
            g.n()
        )));
    }
    if let Some(v) = tau_hat.values.iter().position(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidTarget(format!("entry {v} is {}", tau_hat[v])));
    }
    if (tau_hat[g.v_out()] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidTarget(format!(
            "target at v_out is {}, expected exactly one terminal visit",
            tau_hat[g.v_out()]
        )));
    }
    let support: Vec<usize> = (0..g.n()).filter(|&v| tau_hat[v] > 0.0).collect();
    if tau_hat[g.v_in()] <= 0.0 {
        return Err(Error::SupportMismatch("support excludes v_in".into()));
    }
    let sub = g
        .induced(&support)
        .map_err(|e| Error::SupportMismatch(format!("support does not induce a valid instance: {e}")))?;
    if !sub.out_removal_connected() {
        return Err(Error::SupportMismatch(
            "part of the support is only reachable through v_out".into(),
        ));
    }
    Ok(support)
}

fn residual_norm2(tau: &[f64], tau_hat: &[f64], out: usize) -> f64 {
    tau.iter()
        .zip(tau_hat)
        .enumerate()
        .filter(|(v, _)| *v != out)
        .map(|(_, (a, b))| (a - b) * (a - b))
        .sum()
}

/// `ϑ(ρ) = Σ_v (τ̂(v) − τ_ρ(v))²`, with `τ_ρ` from the fixed-point solve.
/// The `v_out` coordinate is 1 on both sides and contributes nothing.
pub fn cost(g: &GraphInstance, w: &WeightAssignment, tau_hat: &OccupationVector) -> Result<f64> {
    validate_target(g, tau_hat)?;
    unchecked_cost(g, w, &tau_hat.values)
}

pub(crate) fn unchecked_cost(g: &GraphInstance, w: &WeightAssignment, tau_hat: &[f64]) -> Result<f64> {
    let tau = expected_occupation_fixed_point(g, w)?;
    Ok(residual_norm2(&tau.values, tau_hat, g.v_out()))
}

/// Derivatives of the weight-dependent quantities with respect to one
/// vertex weight `ρ(x)`.
#[derive(Debug, Clone)]
pub struct DerivativeBundle {
    pub vertex: usize,
    pub d_tilde_rho: DVector<f64>,
    pub d_vol: f64,
    /// Diagonal of `dT/dρ(x)`; equal to `d_tilde_rho`.
    pub d_degree: DVector<f64>,
    pub d_normalized_laplacian: DMatrix<f64>,
    pub d_phi0: DVector<f64>,
    pub d_projector: DMatrix<f64>,
    /// Filled in by [`green_derivative`].
    pub d_script_g: Option<DMatrix<f64>>,
    pub d_big_g: Option<DMatrix<f64>>,
}

pub fn weight_jacobians(g: &GraphInstance, w: &WeightAssignment, x: usize) -> DerivativeBundle {
    let n = g.n();
    let rho = w.rho();
    let t = w.tilde_rho();
    let vol = w.vol();

    let mut d_t = DVector::zeros(n);
    d_t[x] = w.rho_star()[x];
    for &y in g.neighbors(x) {
        d_t[y] = rho[y];
    }
    let d_vol = 2.0 * w.rho_star()[x];

    // ℒ(y,z) = −ρ(y)ρ(z)/√(ρ̃(y)ρ̃(z)) for y ∼ z; the diagonal is constant.
    let mut d_lap = DMatrix::zeros(n, n);
    for &(y, z) in g.edges() {
        let s = (t[y] * t[z]).sqrt();
        let mut d_num = 0.0;
        if y == x {
            d_num += rho[z];
        }
        if z == x {
            d_num += rho[y];
        }
        let d_s = (t[y] * d_t[z] + t[z] * d_t[y]) / (2.0 * s);
        let d = -(d_num * s - rho[y] * rho[z] * d_s) / (s * s);
        d_lap[(y, z)] = d;
        d_lap[(z, y)] = d;
    }

    let phi0 = DVector::from_iterator(n, t.iter().map(|ty| (ty / vol).sqrt()));
    let d_phi0 = DVector::from_fn(n, |y, _| {
        let d_ratio = (vol * d_t[y] - t[y] * d_vol) / (vol * vol);
        d_ratio / (2.0 * phi0[y])
    });
    let d_proj = &d_phi0 * phi0.transpose() + &phi0 * d_phi0.transpose();

    DerivativeBundle {
        vertex: x,
        d_tilde_rho: d_t.clone(),
        d_vol,
        d_degree: d_t,
        d_normalized_laplacian: d_lap,
        d_phi0,
        d_projector: d_proj,
        d_script_g: None,
        d_big_g: None,
    }
}

/// `dG/dρ(x) = ½ T′T⁻¹G + T^{1/2} 𝒢′ T^{-1/2} − ½ G T⁻¹T′`, with
/// `𝒢′ = −(P′ + 𝒢ℒ′)𝒢 − 𝒢P′`. Stores `𝒢′` and `G′` in the bundle.
pub fn green_derivative(spec: &SpectralData, bundle: &mut DerivativeBundle) -> Result<DMatrix<f64>> {
    let n = spec.degree.len();
    let p = spec.null_projector();
    let d_script = pseudoinverse_derivative(&spec.script_g, &bundle.d_normalized_laplacian, &p, &bundle.d_projector)?;
    let t = &spec.degree;
    let dt = &bundle.d_degree;
    let gm = &spec.big_g;
    let d_big = DMatrix::from_fn(n, n, |a, b| {
        0.5 * dt[a] / t[a] * gm[(a, b)] + (t[a] / t[b]).sqrt() * d_script[(a, b)] - 0.5 * gm[(a, b)] * dt[b] / t[b]
    });
    bundle.d_script_g = Some(d_script);
    bundle.d_big_g = Some(d_big.clone());
    Ok(d_big)
}

/// `dτ_ρ/dρ(x)` from the four Green's-function terms of the occupation
/// formula, each differentiated with the quotient rule.
pub fn occupation_derivative(g: &GraphInstance, w: &WeightAssignment, spec: &SpectralData, bundle: &DerivativeBundle, d_big: &DMatrix<f64>) -> DVector<f64> {
    let (i, o) = (g.v_in(), g.v_out());
    let t = w.tilde_rho();
    let dt = &bundle.d_tilde_rho;
    let gm = &spec.big_g;
    // d/dρ(x) of ρ̃(z)·G(a,b)/ρ̃(a)
    let term = |z: usize, a: usize, b: usize| {
        (t[a] * dt[z] - t[z] * dt[a]) / (t[a] * t[a]) * gm[(a, b)] + t[z] / t[a] * d_big[(a, b)]
    };
    DVector::from_fn(g.n(), |z, _| {
        if z == o {
            0.0
        } else {
            term(z, o, o) - term(z, i, o) - term(z, o, z) + term(z, i, z)
        }
    })
}

/// Cost, gradient over the free weights (every vertex but `v_out`) and the
/// per-vertex derivative bundles.
#[derive(Debug, Clone)]
pub struct GradientReport {
    pub cost: f64,
    pub tau: OccupationVector,
    pub free: Vec<usize>,
    /// `Δ_x` for `x` in `free`, same order.
    pub gradient: Vec<f64>,
    pub bundles: Vec<DerivativeBundle>,
}

impl GradientReport {
    pub fn norm2(&self) -> f64 {
        self.gradient.iter().map(|d| d * d).sum()
    }
}

pub fn free_vertices(g: &GraphInstance) -> Vec<usize> {
    (0..g.n()).filter(|&v| v != g.v_out()).collect()
}

/// Analytic gradient `Δ_x = 2 (τ_ρ − τ̂)·dτ_ρ/dρ(x)`.
pub fn occupation_gradient(g: &GraphInstance, w: &WeightAssignment, tau_hat: &OccupationVector) -> Result<GradientReport> {
    validate_target(g, tau_hat)?;
    analytic_gradient(g, w, &tau_hat.values)
}

pub(crate) fn analytic_gradient(g: &GraphInstance, w: &WeightAssignment, tau_hat: &[f64]) -> Result<GradientReport> {
    let tau = expected_occupation_fixed_point(g, w)?;
    let spec = SpectralData::compute(g, w)?;
    let out = g.v_out();
    let residual: Vec<f64> = (0..g.n())
        .map(|v| if v == out { 0.0 } else { tau[v] - tau_hat[v] })
        .collect();
    let free = free_vertices(g);
    let mut gradient = Vec::with_capacity(free.len());
    let mut bundles = Vec::with_capacity(free.len());
    for &x in &free {
        let mut bundle = weight_jacobians(g, w, x);
        let d_big = green_derivative(&spec, &mut bundle)?;
        let d_tau = occupation_derivative(g, w, &spec, &bundle, &d_big);
        gradient.push(2.0 * residual.iter().zip(d_tau.iter()).map(|(r, d)| r * d).sum::<f64>());
        bundles.push(bundle);
    }
    Ok(GradientReport {
        cost: residual.iter().map(|r| r * r).sum(),
        tau,
        free,
        gradient,
        bundles,
    })
}

/// Step used for central differences in `ρ(x)`.
pub fn fd_step(rho_x: f64) -> f64 {
    1e-5 * rho_x.max(1.0)
}

/// Central finite differences of the fixed-point cost, one free weight at a time.
pub fn finite_difference_gradient(g: &GraphInstance, w: &WeightAssignment, tau_hat: &[f64]) -> Result<Vec<f64>> {
    free_vertices(g)
        .into_iter()
        .map(|x| {
            let h = fd_step(w.rho()[x]);
            let shifted = |s: f64| -> Result<f64> {
                let mut rho = w.rho().to_vec();
                rho[x] += s;
                unchecked_cost(g, &WeightAssignment::new(g, rho)?, tau_hat)
            };
            Ok((shifted(h)? - shifted(-h)?) / (2.0 * h))
        })
        .collect()
}

/// Componentwise relative error with a floor of `1e-6·max(1, ‖reference‖∞)`
/// on the denominator, so vanishing components are compared absolutely.
pub fn max_relative_error(candidate: &[f64], reference: &[f64]) -> f64 {
    let scale = reference.iter().fold(1.0f64, |m, r| m.max(r.abs()));
    candidate
        .iter()
        .zip(reference)
        .map(|(a, r)| (a - r).abs() / r.abs().max(1e-6 * scale))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct GradcheckReport {
    pub rho: Vec<f64>,
    pub tau_hat: Vec<f64>,
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
    pub max_rel_error: f64,
}

/// Compares the analytic gradient to finite differences at weights drawn
/// from `[0.2, 5]` and a target generated by a second random weighting.
pub fn gradcheck(g: &GraphInstance, seed: u64) -> Result<GradcheckReport> {
    let mut rng = generate::rng(seed);
    let rho = generate::random_weights(g, 0.2, 5.0, &mut rng);
    let hidden = generate::random_weights(g, 0.2, 5.0, &mut rng);
    let tau_hat = expected_occupation_fixed_point(g, &WeightAssignment::new(g, hidden)?)?.values;
    // keep the target generic rather than exactly reachable
    let tau_hat: Vec<f64> = tau_hat
        .iter()
        .enumerate()
        .map(|(v, t)| if v == g.v_out() { 1.0 } else { t * rng.random_range(0.9..1.1) })
        .collect();
    let w = WeightAssignment::new(g, rho.clone())?;
    let analytic = analytic_gradient(g, &w, &tau_hat)?.gradient;
    let numeric = finite_difference_gradient(g, &w, &tau_hat)?;
    let max_rel_error = max_relative_error(&analytic, &numeric);
    Ok(GradcheckReport {
        rho,
        tau_hat,
        analytic,
        numeric,
        max_rel_error,
    })
}
