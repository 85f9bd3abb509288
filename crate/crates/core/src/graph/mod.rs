//! Simple undirected graphs over dense vertex ids, generators, and the
//! metric primitives (balls, boundaries, linkage) used throughout the crate.

mod generate;
mod io;
pub(crate) mod ops;
mod set;

use std::collections::VecDeque;

pub use generate::{generate, generate_with_cap, GenSpec, DEFAULT_REJECTION_CAP};
pub use io::{parse_edge_list, read_edge_list, to_edge_list, write_edge_list};
pub use ops::{
    ball, ball_of_set, boundary_ops, closure, count_rooted_connected_sets, graph_power,
    inner_boundary, interior, is_k_linked, is_mutual_cover, k_linked_components, neighborhood,
    outer_boundary, Boundaries,
};
pub use set::VertexSet;

use crate::error::{Error, Result};

/// Sentinel distance for unreachable vertices.
pub const UNREACHABLE: usize = usize::MAX;

/// Immutable, connected, simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    name: String,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, repeated edges,
    /// out-of-range ids and disconnected inputs.
    pub fn from_edges<I>(n: usize, edges: I, name: impl Into<String>) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("repeated edge {u}-{}", w[0])));
            }
        }
        let g = Graph { adj, name: name.into() };
        if !g.is_connected() {
            return Err(Error::InvalidGraph(format!("graph '{}' is not connected", g.name)));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|nb| nb.len() == d).then_some(d)
    }

    pub fn require_regular(&self) -> Result<usize> {
        self.regular_degree().ok_or(Error::NotRegular)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n() })
        }
    }

    /// BFS distances from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS order from `source` (ties broken by neighbor id).
    pub fn bfs_order(&self, source: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = Vec::with_capacity(self.n());
        let mut queue = VecDeque::new();
        seen[source] = true;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    pub fn all_distances(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|v| self.distances_from(v)).collect()
    }

    fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|&d| d != UNREACHABLE)
    }

    /// Neighborhood bitmasks; `None` when `n > 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        (self.n() <= 64).then(|| {
            self.adj
                .iter()
                .map(|nb| nb.iter().fold(0u64, |m, &w| m | 1 << w))
                .collect()
        })
    }

    /// `d_Y(v) = |Y ∩ N(v)|`.
    pub fn degree_into(&self, v: usize, y: &VertexSet) -> usize {
        self.adj[v].iter().filter(|&&w| y.contains(w)).count()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n())
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, ids: I) -> Result<VertexSet> {
        let mut s = self.empty_set();
        for v in ids {
            self.check_vertex(v)?;
            s.insert(v);
        }
        Ok(s)
    }
}
