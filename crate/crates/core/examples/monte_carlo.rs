//! Simulated occupation times against the exact values, and a check that
//! the estimate does not depend on the number of worker threads.
//!
//!     cargo run --release --example monte_carlo

use walk_occupation::generate;
use walk_occupation::occupation::expected_occupation_fixed_point;
use walk_occupation::walk::{empirical_occupation, simulate_walk, walk_rng, MonteCarloConfig};
use walk_occupation::WeightAssignment;

fn main() -> walk_occupation::Result<()> {
    let g = generate::random_connected_graph(7, 0.3, 21);
    let w = WeightAssignment::new(&g, generate::random_weights(&g, 0.2, 5.0, &mut generate::rng(21)))?;

    let walk = simulate_walk(&g, &w, &mut walk_rng(21, 0))?;
    println!("one walk: {:?}", walk.vertices);

    let exact = expected_occupation_fixed_point(&g, &w)?;
    let cfg = MonteCarloConfig::new(200_000, 21);
    let mc = empirical_occupation(&g, &w, &cfg)?;
    println!("{:>6} {:>10} {:>10} {:>8} {:>6}", "vertex", "exact", "mean", "se", "z");
    for v in 0..g.n() {
        let z = if mc.std_err[v] > 0.0 { (mc.mean[v] - exact[v]) / mc.std_err[v] } else { 0.0 };
        println!("{v:>6} {:>10.4} {:>10.4} {:>8.4} {z:>6.2}", exact[v], mc.mean[v], mc.std_err[v]);
    }

    for workers in [1, 2, 8] {
        let again = empirical_occupation(&g, &w, &cfg.workers(workers))?;
        println!("{workers} worker(s): identical = {}", again == mc);
    }
    Ok(())
}
