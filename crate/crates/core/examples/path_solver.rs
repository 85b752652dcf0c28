//! Exact inversion on paths: decompose r into path coefficients and build
//! the weights in closed form.
//!
//!     cargo run --example path_solver

use walk_occupation::generate;
use walk_occupation::occupation::expected_occupation_fixed_point;
use walk_occupation::solvability::{path_decompose, solve_path};
use walk_occupation::{Error, OccupationVector};

fn main() -> walk_occupation::Result<()> {
    let g = generate::path(4);
    let r = OccupationVector::expected(vec![1.0, 2.0, 3.0, 2.0]);
    let d = path_decompose(&g, &r)?;
    let w = solve_path(&g, &r)?;
    println!("r = {:?}", r.values);
    println!("alphas = {:?}", d.alphas);
    println!("rho = {:?}", w.rho());
    println!("forward map = {:?}", expected_occupation_fixed_point(&g, &w)?.values);

    let g = generate::path(8);
    let r = OccupationVector::expected(vec![1.0, 3.5, 4.0, 3.0, 2.75, 3.25, 4.0, 2.0]);
    let w = solve_path(&g, &r)?;
    println!("\nP8 r = {:?}", r.values);
    println!("rho = {:?}", w.rho());

    for bad in [vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]] {
        match solve_path(&generate::path(3), &OccupationVector::expected(bad.clone())) {
            Err(e @ Error::NotInPsi { .. }) => println!("{bad:?}: {e}"),
            other => println!("{bad:?}: unexpected {other:?}"),
        }
    }
    Ok(())
}
