use super::network::{EdgeId, FlowNetwork, FlowState, NodeId};
use super::{ArcGraph, FlowError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidualArc {
    pub from: NodeId,
    pub to: NodeId,
    pub capacity: i64,
    pub cost: i64,
    pub origin: EdgeId,
    pub direction: Direction,
}

/// Residual graph of a feasible flow. Zero-capacity arcs are omitted.
#[derive(Clone, Debug)]
pub struct ResidualGraph {
    arcs: Vec<ResidualArc>,
    out: Vec<Vec<usize>>,
    by_edge: Vec<[Option<usize>; 2]>,
}

impl ResidualGraph {
    pub fn build(network: &FlowNetwork, flow: &FlowState) -> Result<Self, FlowError> {
        flow.verify(network)?;
        let mut graph = Self {
            arcs: Vec::with_capacity(network.edge_count() * 2),
            out: vec![Vec::new(); network.node_count()],
            by_edge: vec![[None, None]; network.edge_count()],
        };
        for (id, (edge, &f)) in network.edges().iter().zip(&flow.flow).enumerate() {
            if f < edge.upper {
                graph.push(ResidualArc {
                    from: edge.from,
                    to: edge.to,
                    capacity: edge.upper - f,
                    cost: edge.cost,
                    origin: id,
                    direction: Direction::Forward,
                });
            }
            if edge.lower < f {
                graph.push(ResidualArc {
                    from: edge.to,
                    to: edge.from,
                    capacity: f - edge.lower,
                    cost: -edge.cost,
                    origin: id,
                    direction: Direction::Backward,
                });
            }
        }
        Ok(graph)
    }

    fn push(&mut self, arc: ResidualArc) {
        let idx = self.arcs.len();
        self.out[arc.from].push(idx);
        let slot = match arc.direction {
            Direction::Forward => 0,
            Direction::Backward => 1,
        };
        self.by_edge[arc.origin][slot] = Some(idx);
        self.arcs.push(arc);
    }

    pub fn arcs(&self) -> &[ResidualArc] {
        &self.arcs
    }

    pub fn arc(&self, idx: usize) -> &ResidualArc {
        &self.arcs[idx]
    }

    /// Index of the residual arc of `edge` in `direction`, if it has capacity.
    pub fn arc_of(&self, edge: EdgeId, direction: Direction) -> Option<usize> {
        match direction {
            Direction::Forward => self.by_edge[edge][0],
            Direction::Backward => self.by_edge[edge][1],
        }
    }
}

impl ArcGraph for ResidualGraph {
    fn node_count(&self) -> usize {
        self.out.len()
    }

    fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    fn endpoints(&self, arc: usize) -> (NodeId, NodeId) {
        let a = &self.arcs[arc];
        (a.from, a.to)
    }

    fn cost(&self, arc: usize) -> i64 {
        self.arcs[arc].cost
    }

    fn out_arcs(&self, node: NodeId) -> &[usize] {
        &self.out[node]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(lower: i64, upper: i64, cost: i64, f: i64) -> ResidualGraph {
        let mut net = FlowNetwork::new(2);
        net.add_edge(0, 1, lower, upper, cost).unwrap();
        net.set_supply(0, f).unwrap();
        net.set_supply(1, -f).unwrap();
        let flow = FlowState::from_flows(&net, vec![f]);
        ResidualGraph::build(&net, &flow).unwrap()
    }

    #[test]
    fn zero_flow_has_forward_arc_only() {
        let r = single(0, 1, 0, 0);
        assert_eq!(r.arcs().len(), 1);
        let a = r.arc(0);
        assert_eq!(
            (a.from, a.to, a.capacity, a.direction),
            (0, 1, 1, Direction::Forward)
        );
    }

    #[test]
    fn saturated_edge_has_backward_arc_only() {
        let r = single(0, 1, 0, 1);
        assert_eq!(r.arcs().len(), 1);
        let a = r.arc(0);
        assert_eq!(
            (a.from, a.to, a.capacity, a.direction),
            (1, 0, 1, Direction::Backward)
        );
    }

    #[test]
    fn interior_flow_has_both_arcs() {
        let r = single(1, 3, 2, 2);
        let fwd = r.arc(r.arc_of(0, Direction::Forward).unwrap());
        let bwd = r.arc(r.arc_of(0, Direction::Backward).unwrap());
        assert_eq!((fwd.from, fwd.to, fwd.capacity, fwd.cost), (0, 1, 1, 2));
        assert_eq!((bwd.from, bwd.to, bwd.capacity, bwd.cost), (1, 0, 1, -2));
    }

    #[test]
    fn infeasible_flow_is_a_contract_violation() {
        let mut net = FlowNetwork::new(2);
        net.add_edge(0, 1, 0, 1, 0).unwrap();
        let flow = FlowState::from_flows(&net, vec![1]);
        assert!(matches!(
            ResidualGraph::build(&net, &flow),
            Err(FlowError::InfeasibleFlow(_))
        ));
    }
}
