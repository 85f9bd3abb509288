use std::collections::VecDeque;

use serde::Serialize;

use super::{Graph, VertexSet, UNREACHABLE};
use crate::error::{NodeBudget, Result};

/// All vertices within distance `radius` of `center`.
pub fn ball(g: &Graph, center: usize, radius: usize) -> Result<VertexSet> {
    g.check_vertex(center)?;
    Ok(ball_of_set(g, &VertexSet::singleton(g.n(), center), radius))
}

/// `B(X, t)`: multi-source BFS truncated at depth `radius`.
pub fn ball_of_set(g: &Graph, x: &VertexSet, radius: usize) -> VertexSet {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    let mut out = g.empty_set();
    for v in x.iter() {
        dist[v] = 0;
        out.insert(v);
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[u] + 1;
                out.insert(w);
                queue.push_back(w);
            }
        }
    }
    out
}

/// `N(X)`: every vertex adjacent to some member of `X`. May intersect `X`.
pub fn neighborhood(g: &Graph, x: &VertexSet) -> VertexSet {
    let mut out = g.empty_set();
    for v in x.iter() {
        for &w in g.neighbors(v) {
            out.insert(w);
        }
    }
    out
}

/// `X⁺ = X ∪ N(X)`.
pub fn closure(g: &Graph, x: &VertexSet) -> VertexSet {
    x.union(&neighborhood(g, x))
}

/// `∂(X) = N(X) ∖ X`.
pub fn outer_boundary(g: &Graph, x: &VertexSet) -> VertexSet {
    neighborhood(g, x).difference(x)
}

/// `∂̄(X) = ∂(V ∖ X)`: members of `X` with a neighbor outside `X`.
pub fn inner_boundary(g: &Graph, x: &VertexSet) -> VertexSet {
    outer_boundary(g, &x.complement())
}

/// `X° = X ∖ ∂̄(X)`.
pub fn interior(g: &Graph, x: &VertexSet) -> VertexSet {
    x.difference(&inner_boundary(g, x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Boundaries {
    pub neighborhood: VertexSet,
    pub outer_boundary: VertexSet,
    pub inner_boundary: VertexSet,
    pub interior: VertexSet,
    pub closure: VertexSet,
}

pub fn boundary_ops(g: &Graph, x: &VertexSet) -> Boundaries {
    let neighborhood = neighborhood(g, x);
    let outer_boundary = neighborhood.difference(x);
    let inner_boundary = inner_boundary(g, x);
    let interior = x.difference(&inner_boundary);
    let closure = x.union(&neighborhood);
    Boundaries { neighborhood, outer_boundary, inner_boundary, interior, closure }
}

/// Connected components of `G^k[Y]`, each listed by increasing smallest id.
pub fn k_linked_components(g: &Graph, y: &VertexSet, k: usize) -> Vec<VertexSet> {
    assert!(k >= 1, "linkage parameter must be positive");
    let mut remaining = y.clone();
    let mut comps = Vec::new();
    while let Some(start) = remaining.first() {
        let mut comp = VertexSet::singleton(g.n(), start);
        remaining.remove(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let near = ball_of_set(g, &VertexSet::singleton(g.n(), u), k);
            for w in near.intersection(&remaining).to_vec() {
                remaining.remove(w);
                comp.insert(w);
                queue.push_back(w);
            }
        }
        comps.push(comp);
    }
    comps
}

/// `G^k[X]` connected. The empty set is not considered linked.
pub fn is_k_linked(g: &Graph, x: &VertexSet, k: usize) -> bool {
    k_linked_components(g, x, k).len() == 1
}

/// `G^k`: distinct vertices adjacent iff their distance in `G` is at most `k`.
pub fn graph_power(g: &Graph, k: usize) -> Graph {
    assert!(k >= 1, "graph power needs k >= 1");
    let edges: Vec<(usize, usize)> = (0..g.n())
        .flat_map(|u| {
            let dist = g.distances_from(u);
            (u + 1..g.n()).filter(move |&v| dist[v] <= k).map(move |v| (u, v))
        })
        .collect();
    Graph::from_edges(g.n(), edges, format!("{}^{k}", g.name()))
        .expect("power of a connected graph is connected")
}

/// `Y` mutually covers `X`: `X ⊆ Y⁺` and `Y ⊆ X⁺`.
pub fn is_mutual_cover(g: &Graph, x: &VertexSet, y: &VertexSet) -> bool {
    x.is_subset(&closure(g, y)) && y.is_subset(&closure(g, x))
}

/// Returned by a connected-set visitor to decide whether to grow the current set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Grow {
    Continue,
    Prune,
}

/// Visits every connected set (with respect to `adj`) containing `root`
/// exactly once. A `Prune` answer skips all supersets of the current set, so
/// the visitor must only prune on monotone conditions.
pub(crate) fn for_each_connected_set<F>(
    adj: &[Vec<usize>],
    root: usize,
    budget: &mut NodeBudget,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&VertexSet) -> Grow,
{
    let n = adj.len();
    let mut current = VertexSet::singleton(n, root);
    let mut banned = VertexSet::empty(n);
    grow(adj, &mut current, &mut banned, budget, &mut visit)
}

fn grow<F>(
    adj: &[Vec<usize>],
    current: &mut VertexSet,
    banned: &mut VertexSet,
    budget: &mut NodeBudget,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&VertexSet) -> Grow,
{
    budget.tick()?;
    if visit(current) == Grow::Prune {
        return Ok(());
    }
    let mut cand = VertexSet::empty(adj.len());
    for u in current.iter() {
        for &w in &adj[u] {
            cand.insert(w);
        }
    }
    let cand = cand.difference(current).difference(banned);
    let mut newly_banned = Vec::new();
    for u in cand.iter() {
        current.insert(u);
        let res = grow(adj, current, banned, budget, visit);
        current.remove(u);
        res?;
        banned.insert(u);
        newly_banned.push(u);
    }
    for u in newly_banned {
        banned.remove(u);
    }
    Ok(())
}

pub(crate) fn adjacency_lists(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// Number of `m`-vertex sets containing `root` that induce a connected subgraph.
pub fn count_rooted_connected_sets(
    g: &Graph,
    root: usize,
    m: usize,
    budget: &mut NodeBudget,
) -> Result<u64> {
    g.check_vertex(root)?;
    let mut count = 0u64;
    if m == 0 {
        return Ok(0);
    }
    for_each_connected_set(&adjacency_lists(g), root, budget, |x| {
        if x.len() == m {
            count += 1;
            Grow::Prune
        } else {
            Grow::Continue
        }
    })?;
    Ok(count)
}
