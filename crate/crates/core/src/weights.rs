//! Vertex weights and the matrices they induce.
//!
//! A vertex weight `ρ` induces edge weights `wt(x, y) = ρ(x)ρ(y)`, so the
//! walk steps from `x` to a neighbour `y` with probability proportional to
//! `ρ(y)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;

/// Positive vertex weights together with the derived quantities
/// `ρ̃(x) = ρ(x)·Σ_{y∼x} ρ(y)`, `ρ*(x) = Σ_{y∼x} ρ(y)`, edge weights and volume.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment {
    rho: Vec<f64>,
    tilde_rho: Vec<f64>,
    rho_star: Vec<f64>,
    edge_wt: Vec<f64>,
    vol: f64,
}

impl WeightAssignment {
    pub fn new(g: &GraphInstance, rho: Vec<f64>) -> Result<Self> {
        if rho.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} vertices",
                rho.len(),
                g.n()
            )));
        }
        if let Some((vertex, &value)) = rho.iter().enumerate().find(|(_, r)| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::NonpositiveWeight { vertex, value });
        }
        let rho_star: Vec<f64> = (0..g.n()).map(|x| g.neighbors(x).iter().map(|&y| rho[y]).sum()).collect();
        let tilde_rho: Vec<f64> = rho.iter().zip(&rho_star).map(|(r, s)| r * s).collect();
        let edge_wt: Vec<f64> = g.edges().iter().map(|&(a, b)| rho[a] * rho[b]).collect();
        let vol = tilde_rho.iter().sum();
        Ok(Self {
            rho,
            tilde_rho,
            rho_star,
            edge_wt,
            vol,
        })
    }

    pub fn uniform(g: &GraphInstance) -> Self {
        Self::new(g, vec![1.0; g.n()]).expect("unit weights are valid")
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn tilde_rho(&self) -> &[f64] {
        &self.tilde_rho
    }

    pub fn rho_star(&self) -> &[f64] {
        &self.rho_star
    }

    /// Edge weights aligned with [`GraphInstance::edges`].
    pub fn edge_wt(&self) -> &[f64] {
        &self.edge_wt
    }

    pub fn vol(&self) -> f64 {
        self.vol
    }

    /// Rescales so that `ρ(v_out) = 1`. The walk is unchanged.
    pub fn normalized(&self, g: &GraphInstance) -> Self {
        let s = self.rho[g.v_out()];
        Self::new(g, self.rho.iter().map(|r| r / s).collect()).expect("positive rescaling stays valid")
    }
}

/// Row-stochastic transition matrix `P(x, y) = ρ(y) / Σ_{z∼x} ρ(z)` for `x ∼ y`.
pub fn transition_matrix(g: &GraphInstance, w: &WeightAssignment) -> DMatrix<f64> {
    let n = g.n();
    let mut p = DMatrix::zeros(n, n);
    for x in 0..n {
        for &y in g.neighbors(x) {
            p[(x, y)] = w.rho[y] / w.rho_star[x];
        }
    }
    p
}

/// The combinatorial Laplacian, `T = diag(ρ̃)` and the normalized Laplacian.
#[derive(Debug, Clone)]
pub struct Laplacians {
    pub combinatorial: DMatrix<f64>,
    pub degree: DVector<f64>,
    pub normalized: DMatrix<f64>,
}

pub fn laplacians(g: &GraphInstance, w: &WeightAssignment) -> Laplacians {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    let mut norm = DMatrix::zeros(n, n);
    for x in 0..n {
        l[(x, x)] = w.tilde_rho[x];
        norm[(x, x)] = 1.0;
        for &y in g.neighbors(x) {
            let wt = w.rho[x] * w.rho[y];
            l[(x, y)] = -wt;
            norm[(x, y)] = -wt / (w.tilde_rho[x] * w.tilde_rho[y]).sqrt();
        }
    }
    Laplacians {
        combinatorial: l,
        degree: DVector::from_column_slice(&w.tilde_rho),
        normalized: norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p3() -> GraphInstance {
        GraphInstance::new(3, &[(0, 1), (1, 2)], 2, 0).unwrap()
    }

    #[test]
    fn single_edge_unit_weights() {
        let g = GraphInstance::new(2, &[(0, 1)], 1, 0).unwrap();
        let w = WeightAssignment::uniform(&g);
        assert_eq!(w.tilde_rho(), &[1.0, 1.0]);
        assert_eq!(w.rho_star(), &[1.0, 1.0]);
        assert_eq!(w.vol(), 2.0);
        let p = transition_matrix(&g, &w);
        assert_eq!(p[(1, 0)], 1.0);
        assert_eq!(p[(0, 1)], 1.0);
        let lap = laplacians(&g, &w);
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(lap.combinatorial, expect);
        assert_eq!(lap.normalized, expect);
    }

    #[test]
    fn path_three_derived_weights() {
        let g = p3();
        let w = WeightAssignment::uniform(&g);
        assert_eq!(w.tilde_rho(), &[1.0, 2.0, 1.0]);
        assert_eq!(w.vol(), 4.0);

        let w = WeightAssignment::new(&g, vec![1.0, 1.0, 2.0]).unwrap();
        assert_eq!(w.tilde_rho(), &[1.0, 3.0, 2.0]);
        assert_eq!(w.rho_star()[1], 3.0);
        assert_eq!(w.vol(), 6.0);
    }

    #[test]
    fn path_three_transitions() {
        let g = p3();
        let p = transition_matrix(&g, &WeightAssignment::uniform(&g));
        assert_eq!(p[(1, 0)], 0.5);
        assert_eq!(p[(1, 2)], 0.5);
        let p = transition_matrix(&g, &WeightAssignment::new(&g, vec![1.0, 1.0, 3.0]).unwrap());
        assert_eq!(p[(1, 2)], 0.75);
        assert_eq!(p[(1, 0)], 0.25);
    }

    #[test]
    fn path_three_laplacians() {
        let g = p3();
        let lap = laplacians(&g, &WeightAssignment::uniform(&g));
        assert_eq!(lap.combinatorial[(0, 0)], 1.0);
        assert_eq!(lap.combinatorial[(1, 1)], 2.0);
        assert_eq!(lap.combinatorial[(0, 1)], -1.0);
        assert_relative_eq!(lap.normalized[(0, 1)], -1.0 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_nonpositive_weight() {
        let g = p3();
        let err = WeightAssignment::new(&g, vec![1.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NonpositiveWeight { vertex: 1, .. }));
        assert!(WeightAssignment::new(&g, vec![1.0, f64::NAN, 1.0]).is_err());
    }

    fn random_instance() -> impl Strategy<Value = (GraphInstance, Vec<f64>)> {
        (3usize..8, any::<u64>()).prop_flat_map(|(n, seed)| {
            let g = crate::generate::random_connected_graph(n, 0.4, seed);
            (Just(g), proptest::collection::vec(0.2f64..5.0, n))
        })
    }

    proptest! {
        #[test]
        fn volume_identities((g, rho) in random_instance()) {
            let w = WeightAssignment::new(&g, rho).unwrap();
            let two_edges = 2.0 * w.edge_wt().iter().sum::<f64>();
            prop_assert!((w.vol() - two_edges).abs() <= 1e-12 * w.vol());
            let lap = laplacians(&g, &w);
            for x in 0..g.n() {
                let row: f64 = lap.combinatorial.row(x).iter().sum();
                prop_assert!(row.abs() <= 1e-12 * w.tilde_rho()[x]);
                prop_assert_eq!(w.tilde_rho()[x], w.rho()[x] * w.rho_star()[x]);
            }
        }

        #[test]
        fn transitions_scale_invariant((g, rho) in random_instance(), c in 0.01f64..100.0) {
            let w = WeightAssignment::new(&g, rho.clone()).unwrap();
            let ws = WeightAssignment::new(&g, rho.iter().map(|r| c * r).collect()).unwrap();
            let p = transition_matrix(&g, &w);
            let ps = transition_matrix(&g, &ws);
            prop_assert!((p.clone() - ps).amax() <= 1e-12);
            for x in 0..g.n() {
                prop_assert!((p.row(x).sum() - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn laplacian_null_vectors((g, rho) in random_instance()) {
            let w = WeightAssignment::new(&g, rho).unwrap();
            let lap = laplacians(&g, &w);
            let ones = DVector::from_element(g.n(), 1.0);
            prop_assert!((&lap.combinatorial * ones).amax() <= 1e-12 * w.vol());
            let phi0 = DVector::from_iterator(g.n(), w.tilde_rho().iter().map(|t| (t / w.vol()).sqrt()));
            prop_assert!((&lap.normalized * phi0).amax() <= 1e-12);
        }
    }
}
