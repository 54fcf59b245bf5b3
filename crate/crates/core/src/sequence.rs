//! Domain consistency for `Sequence(l, u, k, [X_1..X_n])` over 0/1 variables.
//!
//! The window inequalities `l <= X_j + .. + X_{j+k-1} <= u` are turned into
//! equalities with a surplus `Y_j` and a slack `Z_j` per window. Differencing
//! consecutive rows leaves a network matrix, so the constraint becomes a flow
//! problem on `2m + 1` chain nodes (`m = n - k + 1` windows) plus a source and
//! a sink:
//!
//! * `X_i` runs from node `2 max(i-k, 0) + 1` to node `2 min(i, m) + 1`,
//! * `Y_j` runs `2j -> 2j-1` and `Z_j` runs `2j -> 2j+1`,
//! * the source feeds node 1 with exactly `l` and every even node with
//!   exactly `u - l`; the sink drains `u - l` from each odd node `2j+1`,
//!   `j < m`, and `u` from node `2m+1`.
//!
//! Feasible flows are in one-to-one correspondence with solutions. Values
//! are filtered by checking whether the residual arc of each `X_i` edge lies
//! on a cycle, i.e. whether both its endpoints share a strongly connected
//! component.

use crate::domain::{BoolDomainStore, PropagationOutcome, SpecError};
use crate::flow::{
    bfs_path, find_feasible_flow, strongly_connected_components, Direction, EdgeId, FlowNetwork,
    FlowState, NodeId, ResidualGraph,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    pub n: usize,
    pub k: usize,
    pub l: i64,
    pub u: i64,
}

impl SequenceSpec {
    pub fn new(n: usize, k: usize, l: i64, u: i64) -> Result<Self, SpecError> {
        if k < 1 || k > n || l < 0 || l > u || u > k as i64 {
            return Err(SpecError::InvalidSequence { n, k, l, u });
        }
        Ok(Self { n, k, l, u })
    }

    pub fn window_count(&self) -> usize {
        self.n - self.k + 1
    }

    /// `(n - k)(u - l) + u`
    pub fn required_flow(&self) -> i64 {
        (self.n - self.k) as i64 * (self.u - self.l) + self.u
    }

    pub fn window_sums(&self, assignment: &[u8]) -> Vec<i64> {
        assignment
            .windows(self.k)
            .map(|w| w.iter().map(|&x| x as i64).sum())
            .collect()
    }

    pub fn is_satisfied(&self, assignment: &[u8]) -> bool {
        assignment.len() == self.n
            && self
                .window_sums(assignment)
                .into_iter()
                .all(|s| self.l <= s && s <= self.u)
    }
}

/// Where each constraint symbol lives in the compiled network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceNetworkLayout {
    pub x_edge: Vec<EdgeId>,
    pub y_edge: Vec<EdgeId>,
    pub z_edge: Vec<EdgeId>,
    /// Chain node `p` (1-based, `1..=2m+1`) is network node `p - 1`.
    pub chain_nodes: usize,
    pub source: NodeId,
    pub sink: NodeId,
    pub required_flow: i64,
}

impl SequenceNetworkLayout {
    pub fn chain_node(&self, p: usize) -> NodeId {
        debug_assert!(p >= 1 && p <= self.chain_nodes);
        p - 1
    }

    pub fn window_node(&self, j: usize) -> NodeId {
        self.chain_node(2 * j)
    }
}

pub fn build_sequence_network(spec: &SequenceSpec) -> (FlowNetwork, SequenceNetworkLayout) {
    build_chain_network(spec, spec.u - spec.l)
}

/// Shared by the soft variant, which needs wider `Y`/`Z` capacities.
pub(crate) fn build_chain_network(
    spec: &SequenceSpec,
    slack_cap: i64,
) -> (FlowNetwork, SequenceNetworkLayout) {
    let SequenceSpec { n, k, l, u } = *spec;
    let m = spec.window_count();
    let chain_nodes = 2 * m + 1;
    let source = chain_nodes;
    let sink = chain_nodes + 1;
    let node = |p: usize| p - 1;
    let mut net = FlowNetwork::new(chain_nodes + 2);
    let mut add = |from, to, lower, upper| {
        net.add_edge(from, to, lower, upper, 0)
            .expect("sequence network edges are valid by construction")
    };

    let x_edge = (1..=n)
        .map(|i| {
            let from = 2 * i.saturating_sub(k) + 1;
            let to = 2 * i.min(m) + 1;
            add(node(from), node(to), 0, 1)
        })
        .collect();
    let mut y_edge = Vec::with_capacity(m);
    let mut z_edge = Vec::with_capacity(m);
    for j in 1..=m {
        y_edge.push(add(node(2 * j), node(2 * j - 1), 0, slack_cap));
        z_edge.push(add(node(2 * j), node(2 * j + 1), 0, slack_cap));
    }
    add(source, node(1), l, l);
    for j in 1..=m {
        add(source, node(2 * j), u - l, u - l);
    }
    for j in 1..m {
        add(node(2 * j + 1), sink, u - l, u - l);
    }
    add(node(2 * m + 1), sink, u, u);

    let required_flow = spec.required_flow();
    net.set_supply(source, required_flow)
        .expect("source in range");
    net.set_supply(sink, -required_flow).expect("sink in range");
    let layout = SequenceNetworkLayout {
        x_edge,
        y_edge,
        z_edge,
        chain_nodes,
        source,
        sink,
        required_flow,
    };
    (net, layout)
}

/// Reads the assignment off the `X` edges.
pub fn decode_flow(flow: &FlowState, layout: &SequenceNetworkLayout) -> Vec<u8> {
    layout.x_edge.iter().map(|&e| flow.flow[e] as u8).collect()
}

/// Builds the flow that encodes `assignment`, or `None` if some window is
/// violated. `Y_j = sum_j - l` and `Z_j = u - sum_j`.
pub fn encode_assignment(
    spec: &SequenceSpec,
    network: &FlowNetwork,
    layout: &SequenceNetworkLayout,
    assignment: &[u8],
) -> Option<FlowState> {
    if !spec.is_satisfied(assignment) {
        return None;
    }
    let mut flow: Vec<i64> = network.edges().iter().map(|e| e.lower).collect();
    for (i, &x) in assignment.iter().enumerate() {
        flow[layout.x_edge[i]] = x as i64;
    }
    for (j, s) in spec.window_sums(assignment).into_iter().enumerate() {
        flow[layout.y_edge[j]] = s - spec.l;
        flow[layout.z_edge[j]] = spec.u - s;
    }
    let state = FlowState::from_flows(network, flow);
    state.verify(network).ok()?;
    Some(state)
}

/// Stateful DC propagator that keeps the last feasible flow. Every cached
/// flow is a solution of the unrestricted constraint, so it stays usable
/// across backtracking and only needs repair cycles when domains exclude it.
#[derive(Clone, Debug)]
pub struct SequencePropagator {
    spec: SequenceSpec,
    network: FlowNetwork,
    layout: SequenceNetworkLayout,
    cached: Option<FlowState>,
}

impl SequencePropagator {
    pub fn new(spec: SequenceSpec) -> Self {
        let (network, layout) = build_sequence_network(&spec);
        Self {
            spec,
            network,
            layout,
            cached: None,
        }
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    pub fn layout(&self) -> &SequenceNetworkLayout {
        &self.layout
    }

    pub fn cached_flow(&self) -> Option<&FlowState> {
        self.cached.as_ref()
    }

    /// Recomputes a feasible flow from scratch and filters.
    pub fn propagate(
        &mut self,
        domains: &BoolDomainStore,
    ) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
        self.check(domains)?;
        self.restrict(domains, None);
        match find_feasible_flow(&self.network)? {
            Some(flow) => {
                self.cached = Some(flow);
                self.filter(domains, 0)
            }
            None => Ok(PropagationOutcome::inconsistent(domains.clone())),
        }
    }

    /// Fixes `var` to `value` and re-establishes DC, reusing the cached flow.
    pub fn incremental_fix(
        &mut self,
        domains: &BoolDomainStore,
        var: usize,
        value: u8,
    ) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
        self.check(domains)?;
        if var >= self.spec.n || !domains.get(var).contains(value) {
            return Ok(PropagationOutcome::inconsistent(domains.clone()));
        }
        let mut fixed = domains.clone();
        fixed.fix(var, value);
        let mut out = self.sync(&fixed)?;
        if !out.is_consistent() {
            out.store = domains.clone();
        }
        out.pruned += domains.get(var).size() - 1;
        Ok(out)
    }

    /// Re-establishes DC on `domains`, repairing the cached flow with one
    /// unit cycle per variable whose domain excludes its cached value.
    pub fn sync(
        &mut self,
        domains: &BoolDomainStore,
    ) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
        self.check(domains)?;
        let Some(mut flow) = self.cached.take() else {
            return self.propagate(domains);
        };
        let mut repairs = 0;
        loop {
            let pending = self.mismatch(domains, &flow);
            let Some(&var) = pending.first() else { break };
            self.restrict(domains, Some(&pending));
            let residual = ResidualGraph::build(&self.network, &flow)?;
            let edge = self.layout.x_edge[var];
            let dir = if flow.flow[edge] == 0 {
                Direction::Forward
            } else {
                Direction::Backward
            };
            let arc = residual
                .arc_of(edge, dir)
                .expect("unfixed x edge has residual capacity");
            let (tail, head) = {
                let a = residual.arc(arc);
                (a.from, a.to)
            };
            match bfs_path(&residual, head, tail, |_| true) {
                Some(mut cycle) => {
                    cycle.push(arc);
                    flow.push_unit_on_cycle(&residual, &cycle)?;
                    repairs += 1;
                }
                None => {
                    self.cached = Some(flow);
                    let mut out = PropagationOutcome::inconsistent(domains.clone());
                    out.repairs = repairs;
                    return Ok(out);
                }
            }
        }
        self.cached = Some(flow);
        self.restrict(domains, None);
        self.filter(domains, repairs)
    }

    fn check(&self, domains: &BoolDomainStore) -> Result<(), SpecError> {
        if domains.len() != self.spec.n {
            return Err(SpecError::WrongArity {
                expected: self.spec.n,
                actual: domains.len(),
            });
        }
        domains.check_non_empty()
    }

    fn mismatch(&self, domains: &BoolDomainStore, flow: &FlowState) -> Vec<usize> {
        (0..self.spec.n)
            .filter(|&i| {
                !domains
                    .get(i)
                    .contains(flow.flow[self.layout.x_edge[i]] as u8)
            })
            .collect()
    }

    /// Sets X edge capacities from the domains; variables in `relaxed` keep
    /// the full `[0, 1]` range.
    fn restrict(&mut self, domains: &BoolDomainStore, relaxed: Option<&[usize]>) {
        for (i, d) in domains.iter().enumerate() {
            let (lo, hi) = match relaxed {
                Some(r) if r.contains(&i) => (0, 1),
                _ => (d.lower() as i64, d.upper() as i64),
            };
            self.network
                .set_bounds(self.layout.x_edge[i], lo, hi)
                .expect("0/1 bounds are valid");
        }
    }

    fn filter(
        &self,
        domains: &BoolDomainStore,
        repairs: usize,
    ) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
        let flow = self.cached.as_ref().expect("filter runs on a cached flow");
        let residual = ResidualGraph::build(&self.network, flow)?;
        let comp = strongly_connected_components(&residual);
        let mut store = domains.clone();
        let mut pruned = 0;
        for (i, &e) in self.layout.x_edge.iter().enumerate() {
            let d = domains.get(i);
            if d.is_fixed() {
                continue;
            }
            let edge = self.network.edge(e);
            if comp[edge.from] != comp[edge.to] {
                let v = flow.flow[e] as u8;
                store.set(i, d.without(1 - v));
                pruned += 1;
            }
        }
        let mut out = PropagationOutcome::fixpoint(store, pruned);
        out.repairs = repairs;
        Ok(out)
    }
}

/// One-shot DC filtering of `Sequence` on `domains`.
pub fn propagate_dc(
    spec: &SequenceSpec,
    domains: &BoolDomainStore,
) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
    SequencePropagator::new(*spec).propagate(domains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BoolDomain;

    #[test]
    fn running_example_shape() {
        let spec = SequenceSpec::new(6, 3, 1, 2).unwrap();
        let (net, layout) = build_sequence_network(&spec);
        assert_eq!(net.edge_count(), 23);
        assert_eq!(net.node_count(), 11);
        assert_eq!(layout.required_flow, 4 * 2 - 3);
        let ends: Vec<_> = layout
            .x_edge
            .iter()
            .map(|&e| (net.edge(e).from + 1, net.edge(e).to + 1))
            .collect();
        assert_eq!(ends, vec![(1, 3), (1, 5), (1, 7), (3, 9), (5, 9), (7, 9)]);
    }

    #[test]
    fn single_window_shape() {
        let spec = SequenceSpec::new(4, 4, 1, 3).unwrap();
        let (net, _) = build_sequence_network(&spec);
        assert_eq!(net.edge_count(), 5 * 4 - 4 * 4 + 5);
        assert_eq!(net.node_count(), 5);
    }

    #[test]
    fn invalid_specs() {
        assert!(SequenceSpec::new(3, 4, 0, 1).is_err());
        assert!(SequenceSpec::new(3, 0, 0, 0).is_err());
        assert!(SequenceSpec::new(3, 2, 2, 1).is_err());
        assert!(SequenceSpec::new(3, 2, 0, 3).is_err());
    }

    #[test]
    fn free_running_example_has_flow_of_required_value() {
        let spec = SequenceSpec::new(6, 3, 1, 2).unwrap();
        let (net, layout) = build_sequence_network(&spec);
        let flow = find_feasible_flow(&net).unwrap().unwrap();
        assert_eq!(flow.value, 5);
        assert!(spec.is_satisfied(&decode_flow(&flow, &layout)));
    }

    #[test]
    fn encode_decode_round_trip() {
        let spec = SequenceSpec::new(6, 3, 1, 2).unwrap();
        let (net, layout) = build_sequence_network(&spec);
        let x = [1, 0, 1, 0, 1, 0];
        assert_eq!(spec.window_sums(&x), vec![2, 1, 2, 1]);
        let flow = encode_assignment(&spec, &net, &layout, &x).unwrap();
        assert_eq!(decode_flow(&flow, &layout), x);
        assert!(encode_assignment(&spec, &net, &layout, &[1, 1, 1, 0, 0, 0]).is_none());
    }

    #[test]
    fn zero_flow_decodes_to_zeros() {
        let spec = SequenceSpec::new(5, 2, 0, 1).unwrap();
        let (net, layout) = build_sequence_network(&spec);
        let flow = encode_assignment(&spec, &net, &layout, &[0; 5]).unwrap();
        assert_eq!(decode_flow(&flow, &layout), vec![0; 5]);
    }

    #[test]
    fn vacuous_constraint_prunes_nothing() {
        let spec = SequenceSpec::new(5, 3, 0, 3).unwrap();
        let mut d = BoolDomainStore::free(5);
        d.fix(2, 1);
        let out = propagate_dc(&spec, &d).unwrap();
        assert!(out.is_consistent());
        assert_eq!(out.store, d);
        assert_eq!(out.pruned, 0);
    }

    #[test]
    fn exact_one_per_pair() {
        let spec = SequenceSpec::new(3, 2, 1, 1).unwrap();
        let mut d = BoolDomainStore::free(3);
        d.fix(0, 1);
        let out = propagate_dc(&spec, &d).unwrap();
        assert_eq!(
            out.store.0,
            vec![BoolDomain::ONE, BoolDomain::ZERO, BoolDomain::ONE]
        );
    }

    #[test]
    fn inconsistent_leaves_domains_alone() {
        let spec = SequenceSpec::new(3, 2, 1, 1).unwrap();
        let mut d = BoolDomainStore::free(3);
        d.fix(0, 1);
        d.fix(1, 1);
        let out = propagate_dc(&spec, &d).unwrap();
        assert!(!out.is_consistent());
        assert_eq!(out.store, d);
    }

    #[test]
    fn empty_domain_rejected() {
        let spec = SequenceSpec::new(3, 2, 1, 1).unwrap();
        let mut d = BoolDomainStore::free(3);
        d.set(1, BoolDomain::EMPTY);
        assert_eq!(propagate_dc(&spec, &d), Err(SpecError::EmptyDomain(1)));
    }

    #[test]
    fn fix_against_cached_flow_repairs_once() {
        let spec = SequenceSpec::new(3, 2, 1, 1).unwrap();
        let free = BoolDomainStore::free(3);
        let mut prop = SequencePropagator::new(spec);
        prop.propagate(&free).unwrap();
        let cached = decode_flow(prop.cached_flow().unwrap(), prop.layout());
        let flip = 1 - cached[0];
        let out = prop.incremental_fix(&free, 0, flip).unwrap();
        assert_eq!(out.repairs, 1);
        let mut fixed = free.clone();
        fixed.fix(0, flip);
        assert_eq!(out.store, propagate_dc(&spec, &fixed).unwrap().store);
    }

    #[test]
    fn fix_matching_cached_flow_keeps_flow() {
        let spec = SequenceSpec::new(6, 3, 1, 2).unwrap();
        let free = BoolDomainStore::free(6);
        let mut prop = SequencePropagator::new(spec);
        prop.propagate(&free).unwrap();
        let before = prop.cached_flow().unwrap().clone();
        let v = decode_flow(&before, prop.layout())[2];
        let out = prop.incremental_fix(&free, 2, v).unwrap();
        assert_eq!(out.repairs, 0);
        assert_eq!(prop.cached_flow().unwrap(), &before);
        let mut fixed = free.clone();
        fixed.fix(2, v);
        assert_eq!(out.store, propagate_dc(&spec, &fixed).unwrap().store);
    }
}
