//! Shortest paths over [`ArcGraph`]s with possibly negative arc costs.
//!
//! Single-source queries use Bellman-Ford; all-pairs queries use Johnson's
//! reweighting followed by one Dijkstra run per source. Ties between
//! equal-length paths are broken towards the lowest-numbered node.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use super::network::NodeId;
use super::ArcGraph;

/// Path length with an explicit unreachable sentinel. `Infinite` orders after
/// every finite value and absorbs additions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(i64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<i64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn saturating_add(self, w: i64) -> Distance {
        match self {
            Distance::Finite(d) => Distance::Finite(d.saturating_add(w)),
            Distance::Infinite => Distance::Infinite,
        }
    }

    pub fn plus(self, other: Distance) -> Distance {
        match other {
            Distance::Finite(w) => self.saturating_add(w),
            Distance::Infinite => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// A witness cycle: arc indices in traversal order, with total cost < 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeCycle {
    pub arcs: Vec<usize>,
    pub cost: i64,
}

impl fmt::Display for NegativeCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "negative cycle of cost {} over arcs {:?}",
            self.cost, self.arcs
        )
    }
}

impl std::error::Error for NegativeCycle {}

/// Dense distance matrix, `row(u)[v]` is the distance from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    dist: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, from: NodeId, to: NodeId) -> Distance {
        self.dist[from * self.size + to]
    }

    pub fn row(&self, from: NodeId) -> &[Distance] {
        &self.dist[from * self.size..(from + 1) * self.size]
    }
}

pub fn shortest_paths_from<G: ArcGraph + ?Sized>(
    graph: &G,
    source: NodeId,
) -> Result<Vec<Distance>, NegativeCycle> {
    shortest_paths_filtered(graph, source, |_| true)
}

/// Bellman-Ford from `source` restricted to arcs accepted by `keep`. Only
/// negative cycles reachable from `source` are reported.
pub(crate) fn shortest_paths_filtered<G, F>(
    graph: &G,
    source: NodeId,
    keep: F,
) -> Result<Vec<Distance>, NegativeCycle>
where
    G: ArcGraph + ?Sized,
    F: Fn(usize) -> bool,
{
    let n = graph.node_count();
    let mut dist = vec![None::<i64>; n];
    dist[source] = Some(0);
    let pred = bellman_ford(graph, &mut dist, keep)?;
    debug_assert_eq!(pred.len(), n);
    Ok(dist
        .into_iter()
        .map(|d| d.map_or(Distance::Infinite, Distance::Finite))
        .collect())
}

/// Finds any negative cycle in the graph, reachable or not.
pub fn find_negative_cycle<G: ArcGraph + ?Sized>(graph: &G) -> Option<NegativeCycle> {
    let mut dist = vec![Some(0i64); graph.node_count()];
    bellman_ford(graph, &mut dist, |_| true).err()
}

/// Node potentials `h` with `cost(a) + h(from) - h(to) >= 0` for every arc,
/// from a Bellman-Ford pass seeded as if a zero-cost super-source reached
/// every node.
pub fn feasible_potentials<G: ArcGraph + ?Sized>(graph: &G) -> Result<Vec<i64>, NegativeCycle> {
    let mut dist = vec![Some(0i64); graph.node_count()];
    bellman_ford(graph, &mut dist, |_| true)?;
    Ok(dist.into_iter().map(|d| d.unwrap_or(0)).collect())
}

/// Dijkstra from `source` on costs reduced by `potential`; returns true
/// (unreduced) distances.
pub fn dijkstra_with_potentials<G: ArcGraph + ?Sized>(
    graph: &G,
    source: NodeId,
    potential: &[i64],
) -> Vec<Distance> {
    let n = graph.node_count();
    let mut reduced = vec![i64::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    reduced[source] = 0;
    heap.push(Reverse((0i64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &a in graph.out_arcs(u) {
            let (_, v) = graph.endpoints(a);
            let rc = graph.cost(a) + potential[u] - potential[v];
            debug_assert!(rc >= 0, "potentials are not feasible for arc {a}");
            let nd = d + rc;
            if nd < reduced[v] {
                reduced[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    (0..n)
        .map(|v| {
            if done[v] {
                Distance::Finite(reduced[v] - potential[source] + potential[v])
            } else {
                Distance::Infinite
            }
        })
        .collect()
}

/// Johnson's algorithm. Fails with a witness if the graph has a negative cycle.
pub fn all_pairs_shortest_paths<G: ArcGraph + ?Sized>(
    graph: &G,
) -> Result<DistanceMatrix, NegativeCycle> {
    let n = graph.node_count();
    let potential = feasible_potentials(graph)?;
    let mut dist = Vec::with_capacity(n * n);
    for source in 0..n {
        dist.extend(dijkstra_with_potentials(graph, source, &potential));
    }
    Ok(DistanceMatrix { size: n, dist })
}

/// Breadth-first path from `from` to `to` using only arcs accepted by `keep`;
/// returns the arcs in order. Neighbours are scanned in arc order.
pub fn bfs_path<G, F>(graph: &G, from: NodeId, to: NodeId, keep: F) -> Option<Vec<usize>>
where
    G: ArcGraph + ?Sized,
    F: Fn(usize) -> bool,
{
    let n = graph.node_count();
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &a in graph.out_arcs(u) {
            if !keep(a) {
                continue;
            }
            let (_, v) = graph.endpoints(a);
            if !seen[v] {
                seen[v] = true;
                pred[v] = Some(a);
                queue.push_back(v);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let a = pred[v]?;
        path.push(a);
        v = graph.endpoints(a).0;
    }
    path.reverse();
    Some(path)
}

/// Round-robin Bellman-Ford over nodes with a known distance. Returns the
/// predecessor arcs, or a negative cycle found via a relaxation in round `n`.
fn bellman_ford<G, F>(
    graph: &G,
    dist: &mut [Option<i64>],
    keep: F,
) -> Result<Vec<Option<usize>>, NegativeCycle>
where
    G: ArcGraph + ?Sized,
    F: Fn(usize) -> bool,
{
    let n = graph.node_count();
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for round in 0..=n {
        let mut changed = None;
        for u in 0..n {
            let Some(du) = dist[u] else { continue };
            for &a in graph.out_arcs(u) {
                if !keep(a) {
                    continue;
                }
                let (_, v) = graph.endpoints(a);
                let nd = du + graph.cost(a);
                if dist[v].is_none_or(|dv| nd < dv) {
                    dist[v] = Some(nd);
                    pred[v] = Some(a);
                    changed = Some(v);
                }
            }
        }
        match changed {
            None => return Ok(pred),
            Some(v) if round == n => return Err(extract_cycle(graph, &pred, v)),
            Some(_) => {}
        }
    }
    unreachable!("bellman-ford loop always returns")
}

fn extract_cycle<G: ArcGraph + ?Sized>(
    graph: &G,
    pred: &[Option<usize>],
    start: NodeId,
) -> NegativeCycle {
    // Walking back n steps from a node relaxed in the last round lands on
    // the predecessor cycle.
    let mut v = start;
    for _ in 0..graph.node_count() {
        v = graph
            .endpoints(pred[v].expect("relaxed node has a predecessor"))
            .0;
    }
    let anchor = v;
    let mut arcs = Vec::new();
    loop {
        let a = pred[v].expect("cycle node has a predecessor");
        arcs.push(a);
        v = graph.endpoints(a).0;
        if v == anchor {
            break;
        }
    }
    arcs.reverse();
    let cost = arcs.iter().map(|&a| graph.cost(a)).sum();
    debug_assert!(cost < 0, "predecessor cycle must be negative");
    NegativeCycle { arcs, cost }
}
