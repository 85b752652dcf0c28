//! Analytic gradient of the occupation-matching cost against central
//! differences on a handful of graphs.
//!
//!     cargo run --release --example gradient_check

use walk_occupation::generate;
use walk_occupation::reconstruct::gradcheck;

fn main() -> walk_occupation::Result<()> {
    let graphs = [
        ("P3", generate::path(3)),
        ("K3", generate::complete(3)),
        ("K4", generate::complete(4)),
        ("C5", generate::cycle(5)),
        ("tree(6)", generate::random_tree(6, 7)),
        ("petersen", generate::petersen()),
    ];
    for (name, g) in &graphs {
        let worst = (0..5)
            .map(|seed| gradcheck(g, seed).map(|r| r.max_rel_error))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("{name:>9}: max relative error over 5 seeds {worst:.2e}");
    }

    let rep = gradcheck(&generate::path(4), 1)?;
    println!("\nP4, seed 1");
    for (k, (a, f)) in rep.analytic.iter().zip(&rep.numeric).enumerate() {
        println!("  d/drho({}) analytic {a:>14.8} numeric {f:>14.8}", k + 1);
    }
    Ok(())
}
