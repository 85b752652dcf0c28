use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::weights::WeightAssignment;

/// Pearson correlation between `ρ(v)` and the graph distance `d(v, v_out)`.
///
/// Negative values mean weight concentrates near the exit.
pub fn expertise_correlation(g: &GraphInstance, w: &WeightAssignment) -> Result<f64> {
    let dist: Vec<f64> = g.distances_to_out().iter().map(|&d| d as f64).collect();
    pearson(w.rho(), &dist)
}

fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let tiny = |s: f64, m: f64| s <= 1e-24 * (1.0 + m * m) * n;
    if tiny(sxx, mx) {
        return Err(Error::ZeroVariance("weights"));
    }
    if tiny(syy, my) {
        return Err(Error::ZeroVariance("distances"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use rand::Rng;

    #[test]
    fn constant_weights_have_no_correlation() {
        let g = generate::path(4);
        assert!(matches!(
            expertise_correlation(&g, &WeightAssignment::uniform(&g)),
            Err(Error::ZeroVariance("weights"))
        ));
    }

    #[test]
    fn decreasing_weights_on_a_path() {
        let g = generate::path(5);
        let w = WeightAssignment::new(&g, vec![5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        assert!((expertise_correlation(&g, &w).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_distances_are_reported() {
        assert!(matches!(pearson(&[1.0, 2.0], &[3.0, 3.0]), Err(Error::ZeroVariance("distances"))));
    }

    #[test]
    fn matches_computational_formula() {
        let g = generate::path(5);
        for seed in 0..20 {
            let mut rng = generate::rng(seed);
            let rho: Vec<f64> = (0..5).map(|_| rng.random_range(0.2..5.0)).collect();
            let w = WeightAssignment::new(&g, rho.clone()).unwrap();
            // one-pass textbook formula
            let d: Vec<f64> = (0..5).map(|v| v as f64).collect();
            let n = 5.0;
            let (sx, sy) = (rho.iter().sum::<f64>(), d.iter().sum::<f64>());
            let sxy: f64 = rho.iter().zip(&d).map(|(a, b)| a * b).sum();
            let sxx: f64 = rho.iter().map(|a| a * a).sum();
            let syy: f64 = d.iter().map(|b| b * b).sum();
            let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
            assert!((expertise_correlation(&g, &w).unwrap() - r).abs() < 1e-12);
        }
    }
}
