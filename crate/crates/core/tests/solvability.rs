//! Cross-checks between the trace hull and the exact solvers.

use rand::Rng;

use walk_occupation::generate;
use walk_occupation::occupation::expected_occupation_fixed_point;
use walk_occupation::solvability::{
    distinct_traces, enumerate_proper_walks, relint_membership, round_trip_error, shortest_proper_walk, solve_reducible, trace_vector,
    Membership, ROUND_TRIP_TOL,
};
use walk_occupation::{Error, GraphInstance, OccupationVector, WeightAssignment};

fn small_graphs() -> Vec<(&'static str, GraphInstance)> {
    vec![
        ("P3", generate::path(3)),
        ("P4", generate::path(4)),
        ("K3", generate::complete(3)),
        ("K4", generate::complete(4)),
        ("C4", GraphInstance::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 2, 0).unwrap()),
        ("star", GraphInstance::new(4, &[(0, 1), (1, 2), (1, 3)], 2, 0).unwrap()),
        ("tree5", generate::random_tree(5, 3)),
    ]
}

#[test]
fn forward_maps_lie_in_the_relative_interior() {
    let mut rng = generate::rng(17);
    for (name, g) in small_graphs() {
        for _ in 0..5 {
            let rho = generate::random_weights(&g, 0.5, 2.0, &mut rng);
            let r = expected_occupation_fixed_point(&g, &WeightAssignment::new(&g, rho).unwrap()).unwrap();
            let rep = relint_membership(&g, &r, 6 * g.n()).unwrap();
            assert_eq!(rep.membership, Membership::Interior, "{name}: {:?} gave {rep:?}", r.values);
        }
    }
}

/// A strictly positive random convex combination of the given traces.
fn interior_point<R: Rng>(traces: &[Vec<u32>], rng: &mut R) -> Vec<f64> {
    let lambda: Vec<f64> = traces.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = lambda.iter().sum();
    let n = traces[0].len();
    (0..n)
        .map(|v| traces.iter().zip(&lambda).map(|(t, l)| t[v] as f64 * l / total).sum())
        .collect()
}

#[test]
fn interior_points_of_reducible_graphs_are_solvable() {
    let mut rng = generate::rng(19);
    for (name, g) in small_graphs() {
        let traces = distinct_traces(&g, 3 * g.n()).unwrap();
        for _ in 0..5 {
            let r = OccupationVector::expected(interior_point(&traces, &mut rng));
            assert!(relint_membership(&g, &r, 3 * g.n()).unwrap().is_member(), "{name}");
            let w = solve_reducible(&g, &r).unwrap_or_else(|e| panic!("{name}: {:?}: {e}", r.values));
            assert!(round_trip_error(&g, &w, &r).unwrap() <= ROUND_TRIP_TOL);
        }
    }
}

#[test]
fn single_traces_are_not_solvable() {
    for (name, g) in small_graphs() {
        let walks = enumerate_proper_walks(&g, shortest_proper_walk(&g)).unwrap();
        let r = OccupationVector::expected(trace_vector(&walks[0]).iter().map(|&c| c as f64).collect());
        assert!(!relint_membership(&g, &r, 4 * g.n()).unwrap().is_member(), "{name}");
        assert!(
            matches!(solve_reducible(&g, &r), Err(Error::NotInPsi { .. })),
            "{name}: {:?}",
            r.values
        );
    }
}

#[test]
fn points_off_the_hull_are_rejected() {
    // bipartite graphs: breaking the parity balance leaves the affine span
    for (name, g) in [("P4", generate::path(4)), ("star", GraphInstance::new(4, &[(0, 1), (1, 2), (1, 3)], 2, 0).unwrap())] {
        let mut r = expected_occupation_fixed_point(&g, &WeightAssignment::uniform(&g)).unwrap().values;
        r[g.v_in()] += 0.5;
        let r = OccupationVector::expected(r);
        let rep = relint_membership(&g, &r, 4 * g.n()).unwrap();
        assert_eq!(rep.membership, Membership::Outside, "{name}");
        assert!(solve_reducible(&g, &r).is_err(), "{name}");
    }
    // K4: v_in visited less than once
    let g = generate::complete(4);
    let r = OccupationVector::expected(vec![1.0, 0.5, 1.0, 1.0]);
    assert_eq!(relint_membership(&g, &r, 16).unwrap().membership, Membership::Outside);
    assert!(matches!(solve_reducible(&g, &r), Err(Error::NotInPsi { .. })));
}

#[test]
fn out_vertex_must_not_separate_the_graph() {
    // 1 – 0 – 2 with v_out = 0 in the middle: vertex 2 is unreachable by proper walks
    let g = GraphInstance::new(3, &[(0, 1), (0, 2)], 1, 0).unwrap();
    let r = OccupationVector::expected(vec![1.0, 1.0, 0.0]);
    assert!(matches!(solve_reducible(&g, &r), Err(Error::OutRemovalDisconnects(2))));
    assert!(matches!(relint_membership(&g, &r, 8), Err(Error::OutRemovalDisconnects(2))));
    let tau = expected_occupation_fixed_point(&g, &WeightAssignment::uniform(&g)).unwrap();
    assert_eq!(tau.values, vec![1.0, 1.0, 0.0]);
}
