//! Affine dimension of proper-walk traces and membership of targets in the
//! relative interior of their convex hull.
//!
//!     cargo run --release --example hull_membership

use walk_occupation::generate;
use walk_occupation::solvability::{default_cap, hull_dimension, relint_membership};
use walk_occupation::OccupationVector;

fn main() -> walk_occupation::Result<()> {
    let graphs = [
        ("P3", generate::path(3)),
        ("K3", generate::complete(3)),
        ("C4", generate::cycle(4)),
        ("C5", generate::cycle(5)),
        ("K5", generate::complete(5)),
    ];
    for (name, g) in &graphs {
        let dim = hull_dimension(g, default_cap(g))?;
        println!("{name}: n = {}, bipartite = {}, hull dimension = {dim}", g.n(), g.is_bipartite());
    }

    let g = generate::path(3);
    for r in [vec![1.0, 2.0, 2.0], vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]] {
        let rep = relint_membership(&g, &OccupationVector::expected(r.clone()), default_cap(&g))?;
        println!(
            "P3 r = {r:?}: {:?} (cap {}, {} traces, residual {:.1e})",
            rep.membership, rep.cap_used, rep.generators, rep.span_residual
        );
    }
    Ok(())
}
