//! Proper walks and their trace vectors.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::walk::WalkTrace;

/// Visit counts of `walk`, indexed by vertex.
pub fn trace_vector(walk: &WalkTrace) -> Vec<u32> {
    let mut t = vec![0u32; walk.trace.len()];
    for &v in &walk.vertices {
        t[v] += 1;
    }
    t
}

/// Number of steps in the shortest proper walk.
pub fn shortest_proper_walk(g: &GraphInstance) -> usize {
    g.distances_to_out()[g.v_in()]
}

pub(crate) fn check_cap(g: &GraphInstance, cap: usize) -> Result<()> {
    g.require_out_removal_connected()?;
    let needed = shortest_proper_walk(g);
    if cap < needed {
        return Err(Error::CapTooSmall { cap, needed });
    }
    Ok(())
}

/// Every proper walk with at most `cap` steps, in lexicographic order of
/// vertex sequences.
///
/// The count grows exponentially in `cap`; use [`distinct_traces`] when
/// only the traces matter.
pub fn enumerate_proper_walks(g: &GraphInstance, cap: usize) -> Result<Vec<WalkTrace>> {
    check_cap(g, cap)?;
    let dist = g.distances_to_out();
    let mut out = Vec::new();
    let mut path = vec![g.v_in()];
    // explicit DFS over (vertex, next neighbour slot)
    let mut stack = vec![0usize];
    while let Some(slot) = stack.last_mut() {
        let v = *path.last().unwrap();
        let nbrs = g.neighbors(v);
        if *slot >= nbrs.len() {
            stack.pop();
            path.pop();
            continue;
        }
        let u = nbrs[*slot];
        *slot += 1;
        let steps = path.len();
        if steps + dist[u] > cap {
            continue;
        }
        if u == g.v_out() {
            let mut vertices = path.clone();
            vertices.push(u);
            out.push(WalkTrace::from_vertices(g.n(), vertices));
        } else {
            path.push(u);
            stack.push(0);
        }
    }
    Ok(out)
}

/// Streams the distinct traces of proper walks with at most `cap` steps,
/// shortest walks first and sorted within each length. Stops early when
/// `visit` returns `false`.
pub(crate) fn stream_traces<F: FnMut(&[u16]) -> bool>(g: &GraphInstance, cap: usize, mut visit: F) -> Result<()> {
    check_cap(g, cap)?;
    if cap >= u16::MAX as usize {
        return Err(Error::Format(format!("cap {cap} is too large for trace enumeration")));
    }
    let n = g.n();
    let out = g.v_out();
    let dist = g.distances_to_out();
    let mut start = vec![0u16; n];
    start[g.v_in()] = 1;
    let mut frontier: HashSet<(usize, Vec<u16>)> = HashSet::from([(g.v_in(), start)]);
    for steps in 1..=cap {
        let mut next = HashSet::new();
        let mut finished = HashSet::new();
        for (v, counts) in &frontier {
            for &u in g.neighbors(*v) {
                if steps + dist[u] > cap {
                    continue;
                }
                let mut c = counts.clone();
                c[u] += 1;
                if u == out {
                    finished.insert(c);
                } else {
                    next.insert((u, c));
                }
            }
        }
        let mut finished: Vec<Vec<u16>> = finished.into_iter().collect();
        finished.sort_unstable();
        for t in &finished {
            if !visit(t) {
                return Ok(());
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(())
}

/// Distinct traces of proper walks with at most `cap` steps.
pub fn distinct_traces(g: &GraphInstance, cap: usize) -> Result<Vec<Vec<u32>>> {
    let mut all = Vec::new();
    stream_traces(g, cap, |t| {
        all.push(t.iter().map(|&c| c as u32).collect());
        true
    })?;
    Ok(all)
}
