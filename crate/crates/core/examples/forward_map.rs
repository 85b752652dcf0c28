//! Expected occupation times and hitting times on a small weighted grid,
//! computed two independent ways.
//!
//!     cargo run --example forward_map

use std::path::Path;

use walk_occupation::io::load_instance;
use walk_occupation::occupation::{expected_hitting_time, expected_occupation_fixed_point, expected_occupation_green};
use walk_occupation::spectral::SpectralData;

fn main() -> walk_occupation::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/grid3.json");
    let inst = load_instance(&path)?;
    let (g, w) = (&inst.graph, inst.require_weights()?);

    let spec = SpectralData::compute(g, w)?;
    let green = expected_occupation_green(g, w, &spec);
    let fixed = expected_occupation_fixed_point(g, w)?;

    println!("3x3 grid, enter at {}, exit at {}", g.v_in(), g.v_out());
    println!("{:>6} {:>8} {:>12} {:>12} {:>10}", "vertex", "rho", "tau(green)", "tau(fixed)", "E[hit out]");
    for v in 0..g.n() {
        println!(
            "{v:>6} {:>8.4} {:>12.6} {:>12.6} {:>10.4}",
            w.rho()[v],
            green[v],
            fixed[v],
            expected_hitting_time(w, &spec, v, g.v_out())
        );
    }
    let total: f64 = fixed.values.iter().sum();
    println!("max |green - fixed| = {:.2e}", green.max_abs_diff(&fixed.values));
    // each visit but the last is followed by one step
    println!(
        "sum of tau - 1 = {:.6} = E[steps from v_in] = {:.6}",
        total - 1.0,
        expected_hitting_time(w, &spec, g.v_in(), g.v_out())
    );
    Ok(())
}
