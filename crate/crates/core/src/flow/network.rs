use super::FlowError;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Costs, capacities and supplies are bounded by this so that sums of path
/// costs over a whole network cannot overflow `i64`.
pub const MAGNITUDE_LIMIT: i64 = i64::MAX / 4;

/// A directed edge carrying between `lower` and `upper` units at `cost` per unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlowEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub lower: i64,
    pub upper: i64,
    pub cost: i64,
}

/// Capacitated, costed directed graph with lower bounds and node supplies.
///
/// A positive supply makes a node source-like (it must emit that much net
/// flow), a negative supply makes it sink-like.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowNetwork {
    node_count: usize,
    edges: Vec<FlowEdge>,
    supply: Vec<i64>,
    magnitude: i64,
}

impl FlowNetwork {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            edges: Vec::new(),
            supply: vec![0; node_count],
            magnitude: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[FlowEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &FlowEdge {
        &self.edges[id]
    }

    pub fn supply(&self, node: NodeId) -> i64 {
        self.supply[node]
    }

    pub fn supplies(&self) -> &[i64] {
        &self.supply
    }

    /// Total amount that must leave the source-like nodes.
    pub fn required_value(&self) -> i64 {
        self.supply.iter().filter(|&&s| s > 0).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.supply.iter().sum::<i64>() == 0
    }

    pub fn add_edge(
        &mut self,
        from: NodeId,
        to: NodeId,
        lower: i64,
        upper: i64,
        cost: i64,
    ) -> Result<EdgeId, FlowError> {
        let edge = FlowEdge {
            from,
            to,
            lower,
            upper,
            cost,
        };
        self.check_edge(&edge)?;
        self.magnitude = self.charge(self.magnitude, &edge)?;
        self.edges.push(edge);
        Ok(self.edges.len() - 1)
    }

    pub fn set_supply(&mut self, node: NodeId, supply: i64) -> Result<(), FlowError> {
        if node >= self.node_count {
            return Err(FlowError::NodeOutOfRange {
                node,
                node_count: self.node_count,
            });
        }
        if supply.abs() > MAGNITUDE_LIMIT {
            return Err(FlowError::Overflow);
        }
        self.supply[node] = supply;
        Ok(())
    }

    /// Replace the capacity interval of an existing edge.
    pub fn set_bounds(&mut self, id: EdgeId, lower: i64, upper: i64) -> Result<(), FlowError> {
        let mut edge = self.edges[id];
        edge.lower = lower;
        edge.upper = upper;
        self.check_edge(&edge)?;
        if upper > self.edges[id].upper {
            self.magnitude = self.charge(self.magnitude, &edge)?;
        }
        self.edges[id] = edge;
        Ok(())
    }

    fn check_edge(&self, edge: &FlowEdge) -> Result<(), FlowError> {
        for node in [edge.from, edge.to] {
            if node >= self.node_count {
                return Err(FlowError::NodeOutOfRange {
                    node,
                    node_count: self.node_count,
                });
            }
        }
        if edge.lower < 0 || edge.lower > edge.upper {
            return Err(FlowError::InvalidBounds {
                lower: edge.lower,
                upper: edge.upper,
            });
        }
        Ok(())
    }

    // Running bound on sum |w|*u + u over all edges; rejecting anything above
    // MAGNITUDE_LIMIT keeps every flow cost and path length representable.
    fn charge(&self, acc: i64, edge: &FlowEdge) -> Result<i64, FlowError> {
        edge.cost
            .checked_abs()
            .and_then(|w| w.checked_add(1))
            .and_then(|w| w.checked_mul(edge.upper.max(1)))
            .and_then(|c| c.checked_add(acc))
            .filter(|&total| total <= MAGNITUDE_LIMIT)
            .ok_or(FlowError::Overflow)
    }
}

/// An integral flow assignment over the edges of a [`FlowNetwork`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlowState {
    pub flow: Vec<i64>,
    /// Total amount shipped out of the source-like nodes.
    pub value: i64,
    /// `sum(cost(e) * flow(e))`.
    pub cost: i64,
}

impl FlowState {
    pub fn zero(network: &FlowNetwork) -> Self {
        Self {
            flow: vec![0; network.edge_count()],
            value: 0,
            cost: 0,
        }
    }

    /// Builds a state from raw edge flows, deriving value and cost.
    pub fn from_flows(network: &FlowNetwork, flow: Vec<i64>) -> Self {
        let cost = network
            .edges()
            .iter()
            .zip(&flow)
            .map(|(e, f)| e.cost * f)
            .sum();
        Self {
            flow,
            value: network.required_value(),
            cost,
        }
    }

    /// Checks capacity and conservation invariants against `network`.
    pub fn verify(&self, network: &FlowNetwork) -> Result<(), FlowError> {
        if self.flow.len() != network.edge_count() {
            return Err(FlowError::InfeasibleFlow(format!(
                "flow has {} entries for {} edges",
                self.flow.len(),
                network.edge_count()
            )));
        }
        let mut balance = network.supplies().to_vec();
        let mut cost = 0i64;
        for (id, (edge, &f)) in network.edges().iter().zip(&self.flow).enumerate() {
            if f < edge.lower || f > edge.upper {
                return Err(FlowError::InfeasibleFlow(format!(
                    "edge {id} carries {f} outside [{}, {}]",
                    edge.lower, edge.upper
                )));
            }
            balance[edge.to] += f;
            balance[edge.from] -= f;
            cost += edge.cost * f;
        }
        if let Some(node) = balance.iter().position(|&b| b != 0) {
            return Err(FlowError::InfeasibleFlow(format!(
                "conservation violated at node {node} (imbalance {})",
                balance[node]
            )));
        }
        if cost != self.cost {
            return Err(FlowError::InfeasibleFlow(format!(
                "recorded cost {} differs from actual cost {cost}",
                self.cost
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        let mut net = FlowNetwork::new(2);
        assert!(matches!(
            net.add_edge(0, 2, 0, 1, 0),
            Err(FlowError::NodeOutOfRange { node: 2, .. })
        ));
        assert!(matches!(
            net.add_edge(0, 1, 2, 1, 0),
            Err(FlowError::InvalidBounds { .. })
        ));
        assert!(matches!(
            net.add_edge(0, 1, -1, 1, 0),
            Err(FlowError::InvalidBounds { .. })
        ));
    }

    #[test]
    fn rejects_overflowing_costs() {
        let mut net = FlowNetwork::new(2);
        assert!(matches!(
            net.add_edge(0, 1, 0, i64::MAX / 2, 3),
            Err(FlowError::Overflow)
        ));
        net.add_edge(0, 1, 0, 1_000, 1_000).unwrap();
    }

    #[test]
    fn verify_catches_conservation() {
        let mut net = FlowNetwork::new(3);
        net.add_edge(0, 1, 0, 2, 1).unwrap();
        net.add_edge(1, 2, 0, 2, 1).unwrap();
        net.set_supply(0, 1).unwrap();
        net.set_supply(2, -1).unwrap();
        assert!(FlowState::from_flows(&net, vec![1, 1]).verify(&net).is_ok());
        assert!(FlowState::from_flows(&net, vec![1, 0])
            .verify(&net)
            .is_err());
        assert!(FlowState::from_flows(&net, vec![3, 3])
            .verify(&net)
            .is_err());
    }
}
