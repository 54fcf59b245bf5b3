//! Graph and flow primitives shared by the propagators.

mod network;
mod paths;
mod residual;
mod scc;
mod solve;

use std::collections::HashSet;

use thiserror::Error;

pub use network::{EdgeId, FlowEdge, FlowNetwork, FlowState, NodeId, MAGNITUDE_LIMIT};
pub use paths::{
    all_pairs_shortest_paths, bfs_path, dijkstra_with_potentials, feasible_potentials,
    find_negative_cycle, shortest_paths_from, Distance, DistanceMatrix, NegativeCycle,
};
pub use residual::{Direction, ResidualArc, ResidualGraph};
pub use scc::strongly_connected_components;
pub use solve::{find_feasible_flow, min_cost_flow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("node {node} out of range for a network of {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("invalid capacity interval [{lower}, {upper}]")]
    InvalidBounds { lower: i64, upper: i64 },
    #[error("supplies sum to {total}, expected 0")]
    Unbalanced { total: i64 },
    #[error("capacities or costs too large to evaluate without overflow")]
    Overflow,
    #[error("flow is not feasible: {0}")]
    InfeasibleFlow(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
}

/// Read-only view of a directed graph with integer arc costs.
pub trait ArcGraph {
    fn node_count(&self) -> usize;
    fn arc_count(&self) -> usize;
    fn endpoints(&self, arc: usize) -> (NodeId, NodeId);
    fn cost(&self, arc: usize) -> i64;
    fn out_arcs(&self, node: NodeId) -> &[usize];
}

/// Plain adjacency-list digraph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    arcs: Vec<(NodeId, NodeId, i64)>,
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); node_count],
        }
    }

    pub fn from_arcs(node_count: usize, arcs: &[(NodeId, NodeId, i64)]) -> Self {
        let mut g = Self::new(node_count);
        for &(u, v, w) in arcs {
            g.add_arc(u, v, w);
        }
        g
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId, cost: i64) -> usize {
        assert!(
            from < self.out.len() && to < self.out.len(),
            "arc endpoint out of range"
        );
        let idx = self.arcs.len();
        self.arcs.push((from, to, cost));
        self.out[from].push(idx);
        idx
    }

    pub fn arcs(&self) -> &[(NodeId, NodeId, i64)] {
        &self.arcs
    }
}

impl ArcGraph for Digraph {
    fn node_count(&self) -> usize {
        self.out.len()
    }

    fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    fn endpoints(&self, arc: usize) -> (NodeId, NodeId) {
        (self.arcs[arc].0, self.arcs[arc].1)
    }

    fn cost(&self, arc: usize) -> i64 {
        self.arcs[arc].2
    }

    fn out_arcs(&self, node: NodeId) -> &[usize] {
        &self.out[node]
    }
}

impl FlowState {
    /// Pushes one unit around `cycle`, a closed simple sequence of residual
    /// arcs of `residual`. The state is left untouched on error.
    pub fn push_unit_on_cycle(
        &mut self,
        residual: &ResidualGraph,
        cycle: &[usize],
    ) -> Result<(), FlowError> {
        if cycle.is_empty() {
            return Ok(());
        }
        let mut nodes = HashSet::new();
        let mut edges = HashSet::new();
        for (pos, &a) in cycle.iter().enumerate() {
            let arc = residual.arcs().get(a).ok_or_else(|| {
                FlowError::InvalidCycle(format!("arc {a} is not in the residual graph"))
            })?;
            let next = residual.arc(cycle[(pos + 1) % cycle.len()]);
            if arc.to != next.from {
                return Err(FlowError::InvalidCycle(format!(
                    "arc {a} ends at {} but the next arc starts at {}",
                    arc.to, next.from
                )));
            }
            if arc.capacity < 1 {
                return Err(FlowError::InvalidCycle(format!("arc {a} has no capacity")));
            }
            if !nodes.insert(arc.from) {
                return Err(FlowError::InvalidCycle(format!(
                    "node {} visited twice",
                    arc.from
                )));
            }
            if !edges.insert(arc.origin) {
                return Err(FlowError::InvalidCycle(format!(
                    "edge {} traversed in both directions",
                    arc.origin
                )));
            }
        }
        for &a in cycle {
            let arc = residual.arc(a);
            match arc.direction {
                Direction::Forward => self.flow[arc.origin] += 1,
                Direction::Backward => self.flow[arc.origin] -= 1,
            }
            self.cost += arc.cost;
        }
        Ok(())
    }
}

/// Minimum cost of a flow that pushes one extra unit through residual `arc`:
/// `w(f) + w(arc) + w(p)` with `p` a shortest return path from the arc's head
/// to its tail avoiding both residual arcs of the same network edge.
/// `flow` must be a min-cost flow so that the residual graph has no negative
/// cycle.
pub fn min_cost_through_arc(flow: &FlowState, residual: &ResidualGraph, arc: usize) -> Distance {
    let a = residual.arc(arc);
    let origin = a.origin;
    let dist = paths::shortest_paths_filtered(residual, a.to, |b| residual.arc(b).origin != origin)
        .expect("residual graph of a min-cost flow has no negative cycle");
    dist[a.from].saturating_add(flow.cost + a.cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> (FlowNetwork, FlowState) {
        let mut net = FlowNetwork::new(3);
        net.add_edge(0, 1, 0, 1, 1).unwrap();
        net.add_edge(1, 2, 0, 1, 2).unwrap();
        net.add_edge(2, 0, 0, 1, -1).unwrap();
        let flow = FlowState::zero(&net);
        (net, flow)
    }

    #[test]
    fn empty_cycle_is_identity() {
        let (net, mut flow) = triangle();
        let r = ResidualGraph::build(&net, &flow).unwrap();
        let before = flow.clone();
        flow.push_unit_on_cycle(&r, &[]).unwrap();
        assert_eq!(flow, before);
    }

    #[test]
    fn push_updates_flow_and_cost() {
        let (net, mut flow) = triangle();
        let r = ResidualGraph::build(&net, &flow).unwrap();
        flow.push_unit_on_cycle(&r, &[0, 1, 2]).unwrap();
        assert_eq!(flow.flow, vec![1, 1, 1]);
        assert_eq!(flow.cost, 2);
        flow.verify(&net).unwrap();
    }

    #[test]
    fn rejects_two_directions_of_one_edge() {
        let mut net = FlowNetwork::new(2);
        net.add_edge(0, 1, 0, 2, 1).unwrap();
        net.add_edge(1, 0, 0, 2, 0).unwrap();
        let mut flow = FlowState::from_flows(&net, vec![1, 1]);
        let r = ResidualGraph::build(&net, &flow).unwrap();
        let fwd = r.arc_of(0, Direction::Forward).unwrap();
        let bwd = r.arc_of(0, Direction::Backward).unwrap();
        let before = flow.clone();
        assert!(matches!(
            flow.push_unit_on_cycle(&r, &[fwd, bwd]),
            Err(FlowError::InvalidCycle(_))
        ));
        assert_eq!(flow, before);
    }

    #[test]
    fn rejects_open_path() {
        let (net, mut flow) = triangle();
        let r = ResidualGraph::build(&net, &flow).unwrap();
        assert!(flow.push_unit_on_cycle(&r, &[0, 1]).is_err());
    }

    #[test]
    fn cost_through_arc_with_free_return() {
        // 0 -> 1 cost 4, return 1 -> 0 cost 0.
        let mut net = FlowNetwork::new(2);
        net.add_edge(0, 1, 0, 1, 4).unwrap();
        net.add_edge(1, 0, 0, 1, 0).unwrap();
        let flow = min_cost_flow(&net).unwrap().unwrap();
        let r = ResidualGraph::build(&net, &flow).unwrap();
        let arc = r.arc_of(0, Direction::Forward).unwrap();
        assert_eq!(min_cost_through_arc(&flow, &r, arc), Distance::Finite(4));
    }

    #[test]
    fn cost_through_arc_without_return() {
        let mut net = FlowNetwork::new(2);
        net.add_edge(0, 1, 0, 1, 4).unwrap();
        let flow = min_cost_flow(&net).unwrap().unwrap();
        let r = ResidualGraph::build(&net, &flow).unwrap();
        let arc = r.arc_of(0, Direction::Forward).unwrap();
        assert_eq!(min_cost_through_arc(&flow, &r, arc), Distance::Infinite);
    }
}
