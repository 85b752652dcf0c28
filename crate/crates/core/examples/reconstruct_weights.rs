//! Method of moments: recover hidden weights on a tree from its expected
//! occupation vector by steepest descent, then from a simulated estimate.
//!
//!     cargo run --release --example reconstruct_weights

use walk_occupation::generate;
use walk_occupation::occupation::expected_occupation_fixed_point;
use walk_occupation::reconstruct::{expertise_correlation, reconstruct_weights, ReconstructionConfig};
use walk_occupation::walk::{empirical_occupation, MonteCarloConfig};
use walk_occupation::weights::transition_matrix;
use walk_occupation::WeightAssignment;

fn main() -> walk_occupation::Result<()> {
    let g = generate::random_tree(8, 3);
    let hidden = WeightAssignment::new(&g, generate::random_weights(&g, 0.2, 5.0, &mut generate::rng(3)))?;
    let tau = expected_occupation_fixed_point(&g, &hidden)?;
    println!("tree edges {:?}, in {}, out {}", g.edges(), g.v_in(), g.v_out());

    let fit = reconstruct_weights(&g, &tau, &ReconstructionConfig::default())?;
    let p_err = (transition_matrix(&g, &fit.weights) - transition_matrix(&g, &hidden)).amax();
    println!(
        "exact target: {:?} after {} iterations, cost {:.2e}, max |P - P_hidden| {:.2e}",
        fit.status,
        fit.log.len() - 1,
        fit.cost,
        p_err
    );
    for rec in fit.log.iter().step_by((fit.log.len() / 8).max(1)) {
        println!("  iter {:>5}  cost {:.3e}  step {:.3e}", rec.iter, rec.cost, rec.step);
    }

    // Trees are bipartite, so only the walk is identifiable, not rho itself.
    println!("hidden rho {:?}", round(hidden.rho()));
    println!("fitted rho {:?}", round(fit.weights.rho()));

    let mc = empirical_occupation(&g, &hidden, &MonteCarloConfig::new(20_000, 9))?;
    let noisy = reconstruct_weights(&g, &mc.mean, &ReconstructionConfig { max_iters: 2000, ..Default::default() })?;
    let p_err = (transition_matrix(&g, &noisy.weights) - transition_matrix(&g, &hidden)).amax();
    println!("from 20000 simulated walks: cost {:.2e}, max |P - P_hidden| {:.3}", noisy.cost, p_err);

    match expertise_correlation(&g, &noisy.weights) {
        Ok(c) => println!("corr(rho, distance to exit) = {c:.3}"),
        Err(e) => println!("correlation undefined: {e}"),
    }
    Ok(())
}

fn round(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| (v * 1e4).round() / 1e4).collect()
}
