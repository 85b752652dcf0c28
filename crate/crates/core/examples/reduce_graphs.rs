//! Pendant stripping and twin merging: exact solutions on trees and on
//! graphs that reduce to paths or complete graphs.
//!
//!     cargo run --example reduce_graphs

use walk_occupation::generate;
use walk_occupation::occupation::expected_occupation_fixed_point;
use walk_occupation::solvability::{reduce_twins, round_trip_error, solve_reducible};
use walk_occupation::{GraphInstance, OccupationVector, WeightAssignment};

fn main() -> walk_occupation::Result<()> {
    for seed in 0..5 {
        let g = generate::random_tree(10, seed);
        let hidden = WeightAssignment::new(&g, generate::random_weights(&g, 0.2, 5.0, &mut generate::rng(seed)))?;
        let r = expected_occupation_fixed_point(&g, &hidden)?;
        let w = solve_reducible(&g, &r)?;
        println!("tree {seed}: round-trip error {:.1e}", round_trip_error(&g, &w, &r)?);
    }

    // out(0) - a(1) - in(2) - b(3) - out(0): a and b are twins
    let c4 = GraphInstance::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 2, 0)?;
    let r = OccupationVector::expected(vec![1.0, 1.0, 2.0, 1.0]);
    let (reduced, r2, split) = reduce_twins(&c4, &r, 1, 3)?;
    println!("\n4-cycle: merged to {} vertices with r' = {:?}, split alpha = {}", reduced.n(), r2.values, split.alpha);
    println!("rho = {:?}", solve_reducible(&c4, &r)?.rho());

    let p = generate::petersen();
    let r = expected_occupation_fixed_point(&p, &WeightAssignment::uniform(&p))?;
    match solve_reducible(&p, &r) {
        Err(e) => println!("\npetersen: {e}"),
        Ok(_) => println!("\npetersen: unexpectedly reduced"),
    }
    Ok(())
}
