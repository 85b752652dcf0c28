//! Instance generators: named families, seeded random graphs and weights, and
//! the connected graphs on a few vertices up to isomorphism.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::GraphInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Path `0 – 1 – … – (n−1)` with `v_out = 0` and `v_in = n − 1`.
pub fn path(n: usize) -> GraphInstance {
    let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
    GraphInstance::new(n, &edges, n - 1, 0).expect("path is valid")
}

/// `K_n` with `v_out = 0`, `v_in = 1`.
pub fn complete(n: usize) -> GraphInstance {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    GraphInstance::new(n, &edges, 1, 0).expect("complete graph is valid")
}

/// Cycle `0 – 1 – … – (n−1) – 0` with `v_out = 0` and `v_in` opposite.
pub fn cycle(n: usize) -> GraphInstance {
    let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n)).collect();
    GraphInstance::new(n, &edges, n / 2, 0).expect("cycle is valid")
}

/// The Petersen graph with `v_out = 0` and `v_in = 7`.
pub fn petersen() -> GraphInstance {
    let mut edges = Vec::new();
    for k in 0..5 {
        edges.push((k, (k + 1) % 5));
        edges.push((k, k + 5));
        edges.push((k + 5, (k + 2) % 5 + 5));
    }
    GraphInstance::new(10, &edges, 7, 0).expect("petersen is valid")
}

fn is_cut_vertex(n: usize, edges: &[(usize, usize)], v: usize) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let start = if v == 0 { 1 } else { 0 };
    let mut seen = vec![false; n];
    seen[v] = true;
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    !seen.iter().all(|&s| s)
}

fn pick_terminals<R: Rng>(n: usize, edges: &[(usize, usize)], rng: &mut R) -> (usize, usize) {
    let candidates: Vec<usize> = (0..n).filter(|&v| !is_cut_vertex(n, edges, v)).collect();
    let v_out = *candidates.choose(rng).expect("every connected graph has a non-cut vertex");
    let mut v_in = rng.random_range(0..n - 1);
    if v_in >= v_out {
        v_in += 1;
    }
    (v_in, v_out)
}

/// Random tree on `n ≥ 2` vertices with `v_out` a leaf, so every vertex is
/// reachable by a proper walk.
pub fn random_tree(n: usize, seed: u64) -> GraphInstance {
    let mut rng = rng(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|k| (labels[rng.random_range(0..k)], labels[k]))
        .collect();
    let (v_in, v_out) = pick_terminals(n, &edges, &mut rng);
    GraphInstance::new(n, &edges, v_in, v_out).expect("random tree is valid")
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// with probability `extra`. `v_out` is chosen among non-cut vertices.
pub fn random_connected_graph(n: usize, extra: f64, seed: u64) -> GraphInstance {
    let mut rng = rng(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for k in 1..n {
        let a = labels[rng.random_range(0..k)];
        let b = labels[k];
        edges.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.random_bool(extra) {
                edges.insert((a, b));
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    let (v_in, v_out) = pick_terminals(n, &edges, &mut rng);
    GraphInstance::new(n, &edges, v_in, v_out).expect("random connected graph is valid")
}

/// Weights drawn uniformly from `[lo, hi]` with `ρ(v_out) = 1`.
pub fn random_weights<R: Rng>(g: &GraphInstance, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..g.n())
        .map(|v| if v == g.v_out() { 1.0 } else { rng.random_range(lo..=hi) })
        .collect()
}

/// One representative edge list per isomorphism class of connected graphs on
/// `n` vertices (`n ≤ 6`). Counts: 1, 1, 2, 6, 21, 112.
pub fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!((1..=6).contains(&n), "exhaustive enumeration only for n ≤ 6");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut index = vec![vec![0usize; n]; n];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        index[a][b] = k;
        index[b][a] = k;
    }
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if !connected(n, &edges) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = 0u64;
                for &(a, b) in &edges {
                    m |= 1 << index[p[a]][p[b]];
                }
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(edges);
        }
    }
    out
}

/// Picks terminals for an enumerated graph deterministically: `v_out` is the
/// largest non-cut vertex, `v_in` the smallest other vertex.
pub fn with_terminals(n: usize, edges: &[(usize, usize)]) -> GraphInstance {
    let v_out = (0..n).rev().find(|&v| !is_cut_vertex(n, edges, v)).unwrap();
    let v_in = (0..n).find(|&v| v != v_out).unwrap();
    GraphInstance::new(n, edges, v_in, v_out).expect("enumerated graph is valid")
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut comps = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps == 1
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
