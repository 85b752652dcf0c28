//! Simple undirected graphs with a distinguished entry vertex `v_in` and an
//! absorbing exit vertex `v_out`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Validated, immutable graph instance.
///
/// Vertices are dense ids `0..n`. Edges are stored with the smaller endpoint
/// first and sorted, so `edges()[k]` is a stable index for per-edge data.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    v_in: usize,
    v_out: usize,
    dist_to_out: Vec<usize>,
    bipartition: Option<Vec<i8>>,
    out_removal_connected: bool,
}

/// Distances to `v_out` and the bipartition, when one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMetrics {
    pub distances: Vec<usize>,
    pub bipartite: bool,
    /// `c(v) ∈ {−1, 1}` with `c(v_out) = 1`; adjacent vertices get opposite signs.
    pub bipartition: Option<Vec<i8>>,
}

impl GraphInstance {
    /// Validates and builds an instance.
    ///
    /// Rejects self-loops, duplicate edges, `v_in == v_out`, out-of-range ids
    /// and disconnected graphs. Connectivity of `G \ v_out` is recorded but not
    /// required here; see [`GraphInstance::require_out_removal_connected`].
    pub fn new(n: usize, edges: &[(usize, usize)], v_in: usize, v_out: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices);
        }
        for &v in &[v_in, v_out] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if v_in == v_out {
            return Err(Error::InOutCoincide(v_in));
        }

        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }

        let dist = bfs(&adjacency, v_out, None);
        if let Some(v) = dist.iter().position(Option::is_none) {
            return Err(Error::Disconnected(v));
        }
        let dist_to_out: Vec<usize> = dist.into_iter().map(|d| d.unwrap()).collect();
        let bipartition = two_colour(&adjacency, v_out);
        let without_out = bfs(&adjacency, v_in, Some(v_out));
        let out_removal_connected = (0..n).all(|v| v == v_out || without_out[v].is_some());

        Ok(Self {
            n,
            edges,
            adjacency,
            v_in,
            v_out,
            dist_to_out,
            bipartition,
            out_removal_connected,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn v_in(&self) -> usize {
        self.v_in
    }

    pub fn v_out(&self) -> usize {
        self.v_out
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn bipartition(&self) -> Option<&[i8]> {
        self.bipartition.as_deref()
    }

    /// BFS distance from each vertex to `v_out`.
    pub fn distances_to_out(&self) -> &[usize] {
        &self.dist_to_out
    }

    /// Whether every vertex other than `v_out` is reachable from `v_in`
    /// without passing through `v_out`.
    pub fn out_removal_connected(&self) -> bool {
        self.out_removal_connected
    }

    pub fn require_out_removal_connected(&self) -> Result<()> {
        if self.out_removal_connected {
            return Ok(());
        }
        let reach = bfs(&self.adjacency, self.v_in, Some(self.v_out));
        let v = (0..self.n)
            .find(|&v| v != self.v_out && reach[v].is_none())
            .unwrap_or(self.v_out);
        Err(Error::OutRemovalDisconnects(v))
    }

    pub fn metrics(&self) -> GraphMetrics {
        GraphMetrics {
            distances: self.dist_to_out.clone(),
            bipartite: self.is_bipartite(),
            bipartition: self.bipartition.clone(),
        }
    }

    /// True when the graph is a path whose endpoints are `v_out` and `v_in`.
    pub fn is_out_in_path(&self) -> bool {
        self.path_order().is_some()
    }

    /// Vertex order `v_out = v₁, …, v_n = v_in` when the graph is such a path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if self.edges.len() != self.n - 1 || self.degree(self.v_out) != 1 || self.degree(self.v_in) != 1 {
            return None;
        }
        if (0..self.n).any(|v| self.degree(v) > 2) {
            return None;
        }
        let mut order = Vec::with_capacity(self.n);
        let mut prev = usize::MAX;
        let mut cur = self.v_out;
        loop {
            order.push(cur);
            if cur == self.v_in {
                break;
            }
            let next = self.adjacency[cur].iter().copied().find(|&u| u != prev)?;
            prev = cur;
            cur = next;
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    /// Returns the induced subgraph on `keep` (ascending ids), re-indexed densely.
    /// `v_in` and `v_out` must be kept.
    pub fn induced(&self, keep: &[usize]) -> Result<GraphInstance> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            index[v] = i;
        }
        for v in [self.v_in, self.v_out] {
            if index[v] == usize::MAX {
                return Err(Error::SupportMismatch(format!("induced subgraph drops vertex {v}")));
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, b)| (index[a], index[b]))
            .collect();
        GraphInstance::new(keep.len(), &edges, index[self.v_in], index[self.v_out])
    }

    /// Graph with vertex `w` deleted; returns the new graph and the old ids of
    /// the kept vertices in new-id order.
    pub fn remove_vertex(&self, w: usize) -> Result<(GraphInstance, Vec<usize>)> {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != w).collect();
        Ok((self.induced(&keep)?, keep))
    }

    /// Graph with a new vertex (id `n`) attached to `v` by a single edge.
    pub fn attach_pendant(&self, v: usize) -> Result<GraphInstance> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        let mut edges = self.edges.clone();
        edges.push((v, self.n));
        GraphInstance::new(self.n + 1, &edges, self.v_in, self.v_out)
    }
}

fn bfs(adjacency: &[Vec<usize>], source: usize, blocked: Option<usize>) -> Vec<Option<usize>> {
    let mut dist = vec![None; adjacency.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &w in &adjacency[u] {
            if Some(w) == blocked || dist[w].is_some() {
                continue;
            }
            dist[w] = Some(d + 1);
            queue.push_back(w);
        }
    }
    dist
}

fn two_colour(adjacency: &[Vec<usize>], root: usize) -> Option<Vec<i8>> {
    let mut colour = vec![0i8; adjacency.len()];
    colour[root] = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adjacency[u] {
            if colour[w] == 0 {
                colour[w] = -colour[u];
                queue.push_back(w);
            } else if colour[w] == colour[u] {
                return None;
            }
        }
    }
    Some(colour)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_is_smallest_legal_graph() {
        let g = GraphInstance::new(2, &[(0, 1)], 1, 0).unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.is_bipartite());
        assert!(g.out_removal_connected());
        assert_eq!(g.path_order(), Some(vec![0, 1]));
    }

    #[test]
    fn path_three_metrics() {
        let g = GraphInstance::new(3, &[(0, 1), (1, 2)], 2, 0).unwrap();
        let m = g.metrics();
        assert_eq!(m.distances, vec![0, 1, 2]);
        assert!(m.bipartite);
        assert_eq!(m.bipartition.unwrap(), vec![1, -1, 1]);
    }

    #[test]
    fn isolated_vertex_is_disconnected() {
        let err = GraphInstance::new(3, &[(0, 1)], 2, 0).unwrap_err();
        assert!(matches!(err, Error::Disconnected(2)));
    }

    #[test]
    fn construction_errors_name_the_violation() {
        assert!(matches!(
            GraphInstance::new(3, &[(0, 1), (1, 0), (1, 2)], 2, 0),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(GraphInstance::new(2, &[(0, 1), (1, 1)], 1, 0), Err(Error::SelfLoop(1))));
        assert!(matches!(GraphInstance::new(2, &[(0, 1)], 0, 0), Err(Error::InOutCoincide(0))));
        assert!(matches!(
            GraphInstance::new(2, &[(0, 5)], 1, 0),
            Err(Error::VertexOutOfRange { vertex: 5, n: 2 })
        ));
    }

    #[test]
    fn triangle_not_bipartite_square_is() {
        let k3 = GraphInstance::new(3, &[(0, 1), (1, 2), (0, 2)], 1, 0).unwrap();
        assert!(!k3.is_bipartite());
        assert!(k3.is_complete());
        let c4 = GraphInstance::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 2, 0).unwrap();
        let c = c4.bipartition().unwrap();
        assert_eq!(c, &[1, -1, 1, -1]);
    }

    #[test]
    fn out_removal_connectivity_flag() {
        // out in the middle of a path: the far side is unreachable.
        let g = GraphInstance::new(3, &[(0, 1), (1, 2)], 0, 1).unwrap();
        assert!(!g.out_removal_connected());
        assert!(matches!(g.require_out_removal_connected(), Err(Error::OutRemovalDisconnects(2))));
    }

    #[test]
    fn path_order_requires_out_and_in_at_the_ends() {
        let g = GraphInstance::new(4, &[(0, 1), (1, 2), (2, 3)], 2, 0).unwrap();
        assert_eq!(g.path_order(), None);
        let g = GraphInstance::new(4, &[(0, 2), (2, 1), (1, 3)], 3, 0).unwrap();
        assert_eq!(g.path_order(), Some(vec![0, 2, 1, 3]));
    }
}
