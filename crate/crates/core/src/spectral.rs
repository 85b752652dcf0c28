//! Spectrum of the normalized Laplacian and the discrete Green's functions.
//!
//! With `T = diag(ρ̃)` and normalized Laplacian `ℒ = T^{-1/2} L T^{-1/2}`,
//! the Green's function `𝒢` is the pseudoinverse of `ℒ`,
//! `𝒢 = Σ_{i≥1} λᵢ⁻¹ φᵢφᵢ*`, and `G = T^{1/2} 𝒢 T^{-1/2}`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::weights::{laplacians, WeightAssignment};

/// Eigenvalues classified as null when `|λ| ≤ NULL_RTOL · max(1, λ_max)`.
pub const NULL_RTOL: f64 = 1e-9;

/// Orthonormal eigenpairs, eigenvalues nondecreasing, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigen: Eigenpairs,
    /// `𝒢`, the pseudoinverse of the normalized Laplacian.
    pub script_g: DMatrix<f64>,
    /// `G = T^{1/2} 𝒢 T^{-1/2}`.
    pub big_g: DMatrix<f64>,
    pub normalized_laplacian: DMatrix<f64>,
    /// Diagonal of `T`, i.e. `ρ̃`.
    pub degree: DVector<f64>,
}

impl SpectralData {
    pub fn compute(g: &GraphInstance, w: &WeightAssignment) -> Result<Self> {
        let lap = laplacians(g, w);
        let eigen = eigendecompose(&lap.normalized)?;
        let (script_g, big_g) = greens_functions(&eigen, &lap.degree)?;
        Ok(Self {
            eigen,
            script_g,
            big_g,
            normalized_laplacian: lap.normalized,
            degree: lap.degree,
        })
    }

    /// The null eigenvector `φ₀`, entrywise positive for connected graphs.
    pub fn phi0(&self) -> DVector<f64> {
        self.eigen.vectors.column(0).into_owned()
    }

    /// `φ₀φ₀*`, the projector onto the null space of `ℒ`.
    pub fn null_projector(&self) -> DMatrix<f64> {
        let phi = self.phi0();
        &phi * phi.transpose()
    }
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

/// Symmetric eigendecomposition sorted by eigenvalue. Each eigenvector is
/// signed so that its largest-magnitude entry (first one on ties) is positive.
pub fn eigendecompose(m: &DMatrix<f64>) -> Result<Eigenpairs> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let asym = max_asymmetry(m);
    if asym > 1e-12 * m.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::EigenFailure("symmetric QR iteration did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let mut pivot = 0;
        for i in 1..n {
            if v[i].abs() > v[pivot].abs() * (1.0 + 1e-12) {
                pivot = i;
            }
        }
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(col, &(v * sign));
    }
    if values.iter().any(|l| !l.is_finite()) {
        return Err(Error::EigenFailure("non-finite eigenvalue".into()));
    }
    Ok(Eigenpairs { values, vectors })
}

/// Number of eigenvalues treated as zero.
pub fn null_count(values: &DVector<f64>) -> usize {
    let scale = values.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    values.iter().filter(|l| l.abs() <= NULL_RTOL * scale).count()
}

/// Builds `(𝒢, G)` from the eigenpairs of `ℒ` and the diagonal of `T`.
pub fn greens_functions(eigen: &Eigenpairs, degree: &DVector<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = eigen.values.len();
    if degree.len() != n {
        return Err(Error::DimensionMismatch(format!("{} eigenpairs, {} degrees", n, degree.len())));
    }
    let count = null_count(&eigen.values);
    if count != 1 {
        return Err(Error::ZeroEigenvalueAmbiguous { count });
    }
    let mut script_g = DMatrix::zeros(n, n);
    for i in 1..n {
        let phi = eigen.vectors.column(i);
        script_g += (phi * phi.transpose()) / eigen.values[i];
    }
    // Symmetrize away rounding so downstream symmetry checks hold exactly.
    script_g = (&script_g + script_g.transpose()) * 0.5;
    let big_g = conjugate_by_sqrt_degree(&script_g, degree);
    Ok((script_g, big_g))
}

/// `T^{1/2} A T^{-1/2}` for diagonal `T`.
pub fn conjugate_by_sqrt_degree(a: &DMatrix<f64>, degree: &DVector<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |x, y| a[(x, y)] * (degree[x] / degree[y]).sqrt())
}

/// Derivative of the pseudoinverse `A` of a symmetric matrix `B(t)` of
/// constant rank: `A′ = −(P′ + A B′) A − A P′`, where `P` is the projector
/// onto the null space of `B` and `P′` its derivative.
pub fn pseudoinverse_derivative(
    a: &DMatrix<f64>,
    b_prime: &DMatrix<f64>,
    p: &DMatrix<f64>,
    p_prime: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    for (name, m) in [("A", a), ("B'", b_prime), ("P", p), ("P'", p_prime)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(-(p_prime + a * b_prime) * a - a * p_prime)
}

/// Pseudoinverse of a symmetric matrix through its eigendecomposition,
/// along with the projector onto its null space.
pub fn symmetric_pinv(b: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = eigendecompose(b)?;
    let n = b.nrows();
    let scale = eig.values.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let mut a = DMatrix::zeros(n, n);
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n {
        let x = eig.vectors.column(i);
        let outer = x * x.transpose();
        if eig.values[i].abs() <= NULL_RTOL * scale {
            p += outer;
        } else {
            a += outer / eig.values[i];
        }
    }
    Ok((a, p))
}
