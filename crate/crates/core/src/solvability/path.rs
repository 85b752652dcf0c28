//! Exact solver for paths `v_out = v₁ – v₂ – … – v_n = v_in`.

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::OccupationVector;
use crate::weights::WeightAssignment;

use super::{check_target, round_trip};

/// `r = 1 + Σ_{j=2}^{n−1} αⱼ fⱼ` with `fⱼ = eⱼ + e_{j+1}` along the path order.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDecomposition {
    /// Vertex ids in path order, starting at `v_out`.
    pub order: Vec<usize>,
    /// `alphas[k]` is `α_{k+2}`.
    pub alphas: Vec<f64>,
}

impl PathDecomposition {
    /// `α_j` for `2 ≤ j ≤ n − 1`, 1-based along the path.
    pub fn alpha(&self, j: usize) -> f64 {
        self.alphas[j - 2]
    }

    /// Rebuilds `r` from the coefficients.
    pub fn occupation(&self) -> Vec<f64> {
        let n = self.order.len();
        let mut r = vec![1.0; n];
        for j in 2..n {
            r[self.order[j - 1]] += self.alpha(j);
            r[self.order[j]] += self.alpha(j);
        }
        r
    }
}

fn not_in_psi(reason: String) -> Error {
    Error::NotInPsi {
        stage: "path".into(),
        reason,
    }
}

/// Solves the triangular system for the `αⱼ` and checks they are positive.
pub fn path_decompose(g: &GraphInstance, r: &OccupationVector) -> Result<PathDecomposition> {
    check_target(g, r)?;
    let order = g.path_order().ok_or_else(|| {
        Error::Format("graph is not a path with v_out and v_in at its ends".into())
    })?;
    let n = order.len();
    let rv = |j: usize| r[order[j - 1]];
    let mut alphas = Vec::with_capacity(n.saturating_sub(2));
    let mut prev = 0.0;
    for j in 2..n {
        let a = rv(j) - 1.0 - prev;
        if !(a > 0.0) {
            return Err(not_in_psi(format!("alpha_{j} = {a} is not positive")));
        }
        alphas.push(a);
        prev = a;
    }
    let last = rv(n);
    if (last - (1.0 + prev)).abs() > 1e-9 * last.abs().max(1.0) {
        return Err(not_in_psi(format!(
            "r(v_in) = {last} but the decomposition requires {}",
            1.0 + prev
        )));
    }
    Ok(PathDecomposition { order, alphas })
}

/// Weights with `ρ(v₁) = ρ(v₂) = 1` and, for `j ≥ 3`,
/// `ρ(vⱼ) = Π_{k=0}^{⌊(j−3)/2⌋} α_{j−2k−1} / Π_{k=0}^{⌊(j−4)/2⌋} (1 + α_{j−2k−2})`.
pub fn path_weights(d: &PathDecomposition) -> Vec<f64> {
    let n = d.order.len();
    let mut rho = vec![1.0; n];
    for j in 3..=n {
        let mut num = 1.0;
        for k in 0..=(j - 3) / 2 {
            num *= d.alpha(j - 2 * k - 1);
        }
        let mut den = 1.0;
        if j >= 4 {
            for k in 0..=(j - 4) / 2 {
                den *= 1.0 + d.alpha(j - 2 * k - 2);
            }
        }
        rho[d.order[j - 1]] = num / den;
    }
    rho
}

pub fn solve_path(g: &GraphInstance, r: &OccupationVector) -> Result<WeightAssignment> {
    let d = path_decompose(g, r)?;
    let w = WeightAssignment::new(g, path_weights(&d))?;
    round_trip(g, &w, r)?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use rand::Rng;

    fn occ(v: &[f64]) -> OccupationVector {
        OccupationVector::expected(v.to_vec())
    }

    #[test]
    fn decompositions() {
        let d = path_decompose(&generate::path(3), &occ(&[1.0, 2.0, 2.0])).unwrap();
        assert_eq!(d.alphas, vec![1.0]);
        let d = path_decompose(&generate::path(4), &occ(&[1.0, 2.0, 3.0, 2.0])).unwrap();
        assert_eq!(d.alphas, vec![1.0, 1.0]);
        assert!(matches!(
            path_decompose(&generate::path(3), &occ(&[1.0, 1.0, 1.0])),
            Err(Error::NotInPsi { .. })
        ));
        assert!(matches!(
            path_decompose(&generate::path(3), &occ(&[1.0, 2.0, 3.0])),
            Err(Error::NotInPsi { .. })
        ));
    }

    #[test]
    fn solutions() {
        let w = solve_path(&generate::path(3), &occ(&[1.0, 2.0, 2.0])).unwrap();
        assert_eq!(w.rho(), &[1.0, 1.0, 1.0]);
        let w = solve_path(&generate::path(4), &occ(&[1.0, 2.0, 3.0, 2.0])).unwrap();
        assert_eq!(w.rho(), &[1.0, 1.0, 1.0, 0.5]);
        let w = solve_path(&generate::path(2), &occ(&[1.0, 1.0])).unwrap();
        assert_eq!(w.rho(), &[1.0, 1.0]);
    }

    #[test]
    fn relabelled_path() {
        // out = 2, in = 0, order 2-1-3-0
        let g = GraphInstance::new(4, &[(2, 1), (1, 3), (3, 0)], 0, 2).unwrap();
        let mut r = vec![0.0; 4];
        for (pos, v) in [2, 1, 3, 0].into_iter().enumerate() {
            r[v] = [1.0, 2.0, 3.0, 2.0][pos];
        }
        let w = solve_path(&g, &occ(&r)).unwrap();
        assert_eq!(w.rho()[0], 0.5);
    }

    #[test]
    fn random_alphas_round_trip() {
        let mut rng = generate::rng(5);
        for _ in 0..30 {
            let n = rng.random_range(3..=12);
            let g = generate::path(n);
            let d = PathDecomposition {
                order: (0..n).collect(),
                alphas: (2..n).map(|_| rng.random_range(1e-3..=5.0)).collect(),
            };
            let r = occ(&d.occupation());
            let back = path_decompose(&g, &r).unwrap();
            for (a, b) in back.alphas.iter().zip(&d.alphas) {
                assert!((a - b).abs() < 1e-9 * b.max(1.0));
            }
            solve_path(&g, &r).unwrap();
        }
    }
}
