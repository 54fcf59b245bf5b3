//! `SoftSequence(l, u, k, T, [X_1..X_n])`: the total window violation
//! `sum_j max(l - s_j, s_j - u, 0)` must not exceed `T`.
//!
//! The hard network gains, per window `j`, a cost-1 edge `Q_j: 2j-1 -> 2j`
//! absorbing a shortfall below `l` and a cost-1 edge `P_j: 2j+1 -> 2j`
//! absorbing an excess above `u`. A min-cost flow gives the least violation
//! reachable from the current domains; shortest return paths in its residual
//! graph give the least violation for each flipped `X_i`.

use crate::domain::{BoolDomainStore, CostVarDomain, Interval, PropagationOutcome, SpecError};
use crate::flow::{
    all_pairs_shortest_paths, min_cost_flow, Direction, EdgeId, FlowNetwork, ResidualGraph,
};
use crate::sequence::{build_chain_network, SequenceNetworkLayout, SequenceSpec};

/// Same parameters as the hard constraint.
pub type SoftSequenceSpec = SequenceSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftNetworkLayout {
    pub base: SequenceNetworkLayout,
    pub q_edge: Vec<EdgeId>,
    pub p_edge: Vec<EdgeId>,
}

/// Store for the soft constraint: the `X_i` plus the cost variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftStore {
    pub x: BoolDomainStore,
    pub t: CostVarDomain,
}

pub fn build_soft_network(spec: &SoftSequenceSpec) -> (FlowNetwork, SoftNetworkLayout) {
    // With penalties in play a window sum can leave [l, u], so Y_j and Z_j
    // need room up to k rather than u - l.
    let (mut net, base) = build_chain_network(spec, spec.k as i64);
    let m = spec.window_count();
    let k = spec.k as i64;
    let mut q_edge = Vec::with_capacity(m);
    let mut p_edge = Vec::with_capacity(m);
    for j in 1..=m {
        let w = base.window_node(j);
        q_edge.push(
            net.add_edge(base.chain_node(2 * j - 1), w, 0, spec.l, 1)
                .expect("valid penalty edge"),
        );
        p_edge.push(
            net.add_edge(base.chain_node(2 * j + 1), w, 0, k - spec.u, 1)
                .expect("valid penalty edge"),
        );
    }
    (
        net,
        SoftNetworkLayout {
            base,
            q_edge,
            p_edge,
        },
    )
}

/// `sum_j max(l - s_j, s_j - u, 0)` over all windows.
pub fn violation_cost(spec: &SoftSequenceSpec, assignment: &[u8]) -> i64 {
    spec.window_sums(assignment)
        .into_iter()
        .map(|s| (spec.l - s).max(s - spec.u).max(0))
        .sum()
}

/// Min-cost-flow consistency, DC on the `X_i` and BC on `T`.
pub fn propagate_soft(
    spec: &SoftSequenceSpec,
    domains: &BoolDomainStore,
    t: CostVarDomain,
) -> Result<PropagationOutcome<SoftStore>, SpecError> {
    if domains.len() != spec.n {
        return Err(SpecError::WrongArity {
            expected: spec.n,
            actual: domains.len(),
        });
    }
    domains.check_non_empty()?;
    let input = SoftStore {
        x: domains.clone(),
        t,
    };
    if t.is_empty() {
        return Ok(PropagationOutcome::inconsistent(input));
    }
    let (mut net, layout) = build_soft_network(spec);
    for (i, d) in domains.iter().enumerate() {
        net.set_bounds(layout.base.x_edge[i], d.lower() as i64, d.upper() as i64)?;
    }
    let Some(flow) = min_cost_flow(&net)? else {
        return Ok(PropagationOutcome::inconsistent(input));
    };
    let cost = flow.cost;
    if cost > t.hi {
        return Ok(PropagationOutcome::inconsistent(input));
    }
    let new_t = Interval::new(t.lo.max(cost), t.hi);
    let mut pruned = (new_t.lo - t.lo) as usize;

    let residual = ResidualGraph::build(&net, &flow)?;
    let dist = all_pairs_shortest_paths(&residual)
        .expect("residual graph of a min-cost flow has no negative cycle");
    let mut x = domains.clone();
    for (i, &e) in layout.base.x_edge.iter().enumerate() {
        let d = domains.get(i);
        if d.is_fixed() {
            continue;
        }
        let v = flow.flow[e] as u8;
        let dir = if v == 0 {
            Direction::Forward
        } else {
            Direction::Backward
        };
        let arc = residual.arc(
            residual
                .arc_of(e, dir)
                .expect("free x edge has residual arc"),
        );
        let through = dist.get(arc.to, arc.from).saturating_add(cost + arc.cost);
        if through.finite().is_none_or(|c| c > t.hi) {
            x.set(i, d.without(1 - v));
            pruned += 1;
        }
    }
    Ok(PropagationOutcome::fixpoint(
        SoftStore { x, t: new_t },
        pruned,
    ))
}
