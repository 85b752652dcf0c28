//! Exact inversion on complete graphs, including targets that need one
//! weight above half of the total.
//!
//!     cargo run --example complete_graph_solver

use walk_occupation::generate;
use walk_occupation::solvability::{complete_betas, complete_occupation, solve_complete};
use walk_occupation::OccupationVector;

fn main() -> walk_occupation::Result<()> {
    let g = generate::complete(3);
    for r in [vec![1.0, 4.0 / 3.0, 2.0 / 3.0], vec![1.0, 1.56, 0.96]] {
        let beta = complete_betas(&g, &OccupationVector::expected(r.clone()))?;
        println!("K3 r = {r:?} -> beta = {beta:?}");
    }

    let g = generate::complete(5);
    let beta = [0.08, 0.12, 0.55, 0.15, 0.10];
    let r = complete_occupation(&g, &beta);
    let w = solve_complete(&g, &OccupationVector::expected(r.clone()))?;
    let total: f64 = w.rho().iter().sum();
    println!("\nK5 r = {r:?}");
    println!("recovered beta = {:?}", w.rho().iter().map(|x| x / total).collect::<Vec<_>>());

    let g = generate::complete(4);
    match solve_complete(&g, &OccupationVector::expected(vec![1.0, 5.0, 1.0, 1.0])) {
        Err(e) => println!("\nK4 r = [1, 5, 1, 1]: {e}"),
        Ok(w) => println!("unexpected solution {:?}", w.rho()),
    }
    Ok(())
}
