//! Expected occupation times of the walk started at `v_in` and absorbed at
//! `v_out`, computed by the Green's-function formula or as the pinned fixed
//! point of the visit-balance matrix `M`.
//!
//! Both routes count the terminal visit, so `τ(v_out) = 1`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::spectral::SpectralData;
use crate::weights::WeightAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OccupationKind {
    Expected,
    Empirical,
}

/// Vertex-indexed visit counts, expected or averaged over sampled walks.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationVector {
    pub values: Vec<f64>,
    pub kind: OccupationKind,
}

impl OccupationVector {
    pub fn expected(values: Vec<f64>) -> Self {
        Self {
            values,
            kind: OccupationKind::Expected,
        }
    }

    pub fn empirical(values: Vec<f64>) -> Self {
        Self {
            values,
            kind: OccupationKind::Empirical,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for OccupationVector {
    type Output = f64;

    fn index(&self, v: usize) -> &f64 {
        &self.values[v]
    }
}

/// The matrix `M` whose pinned fixed point `Mr = r, r(v_out) = 1` is the
/// expected occupation vector.
///
/// `M(v, w) = ρ(v) / Σ_{u∼w} ρ(u)` for `v ∼ w` with `v, w ≠ v_out`, plus
/// `M(v_out, v_out) = M(v_in, v_out) = 1`. Every other entry is zero.
pub fn occupation_matrix(g: &GraphInstance, w: &WeightAssignment) -> DMatrix<f64> {
    let n = g.n();
    let out = g.v_out();
    let rho = w.rho();
    let rho_star = w.rho_star();
    let mut m = DMatrix::zeros(n, n);
    for v in (0..n).filter(|&v| v != out) {
        for &u in g.neighbors(v) {
            if u != out {
                m[(v, u)] = rho[v] / rho_star[u];
            }
        }
    }
    m[(out, out)] = 1.0;
    m[(g.v_in(), out)] = 1.0;
    m
}

/// Solves `(M − I) r = 0` with the `v_out` row replaced by `r(v_out) = 1`.
pub fn expected_occupation_fixed_point(g: &GraphInstance, w: &WeightAssignment) -> Result<OccupationVector> {
    let n = g.n();
    let out = g.v_out();
    let mut a = occupation_matrix(g, w) - DMatrix::identity(n, n);
    a.row_mut(out).fill(0.0);
    a[(out, out)] = 1.0;
    let mut rhs = DVector::zeros(n);
    rhs[out] = 1.0;
    let r = a.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(OccupationVector::expected(r.iter().map(|&x| x.max(0.0)).collect()))
}

/// Green's-function route:
/// `τ(x) = ρ̃(x)·(G(o,o)/ρ̃(o) − G(i,o)/ρ̃(i) − G(o,x)/ρ̃(o) + G(i,x)/ρ̃(i))`.
///
/// The formula counts visits strictly before absorption and vanishes at
/// `v_out`; that entry is set to 1 to count the terminal visit.
pub fn expected_occupation_green(g: &GraphInstance, w: &WeightAssignment, spec: &SpectralData) -> OccupationVector {
    let (i, o) = (g.v_in(), g.v_out());
    let t = w.tilde_rho();
    let gm = &spec.big_g;
    let base = gm[(o, o)] / t[o] - gm[(i, o)] / t[i];
    let values = (0..g.n())
        .map(|x| {
            if x == o {
                1.0
            } else {
                t[x] * (base - gm[(o, x)] / t[o] + gm[(i, x)] / t[i])
            }
        })
        .collect();
    OccupationVector::expected(values)
}

/// Expected first hitting time `E(x → y) = vol/ρ̃(y)·G(y,y) − vol/ρ̃(x)·G(x,y)`,
/// with `E(x → x) = 0`.
pub fn expected_hitting_time(w: &WeightAssignment, spec: &SpectralData, x: usize, y: usize) -> f64 {
    if x == y {
        return 0.0;
    }
    let t = w.tilde_rho();
    let vol = w.vol();
    let gm = &spec.big_g;
    (vol / t[y] * gm[(y, y)] - vol / t[x] * gm[(x, y)]).max(0.0)
}
