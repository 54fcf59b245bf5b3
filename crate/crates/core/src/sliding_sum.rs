//! `SlidingSum` over integer intervals and `Gen-Sequence` over 0/1 variables.
//!
//! Both are systems `l_w <= X_s + .. + X_{s+k-1} <= u_w` plus
//! `a_i <= X_i <= b_i`. The dual of that LP is a circulation on nodes
//! `1..=n+1`: per variable an arc `i -> i+1` of cost `-a_i` and an arc
//! `i+1 -> i` of cost `b_i`; per window an arc `s -> s+k` of cost `-l` and
//! an arc `s+k -> s` of cost `u`. The system is satisfiable iff this graph
//! has no negative cycle, and with `d` its shortest-path distances each
//! `X_i` lies in `[-d(i, i+1), d(i+1, i)]`.

use crate::domain::{BoolDomainStore, IntDomainStore, Interval, PropagationOutcome, SpecError};
use crate::flow::{
    dijkstra_with_potentials, feasible_potentials, find_negative_cycle, ArcGraph, Digraph, NodeId,
    MAGNITUDE_LIMIT,
};

/// A window `<l, u, k, s>`: `l <= X_s + .. + X_{s+k-1} <= u` with `s` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WindowSpec {
    pub start: usize,
    pub len: usize,
    pub lower: i64,
    pub upper: i64,
}

impl WindowSpec {
    pub fn new(start: usize, len: usize, lower: i64, upper: i64) -> Self {
        Self {
            start,
            len,
            lower,
            upper,
        }
    }

    /// 0-based variable indices covered by the window.
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start - 1..self.start - 1 + self.len
    }
}

pub fn validate_windows(n: usize, windows: &[WindowSpec]) -> Result<(), SpecError> {
    for (idx, w) in windows.iter().enumerate() {
        let reason = if w.start < 1 {
            Some("start must be at least 1".to_string())
        } else if w.len < 1 {
            Some("length must be at least 1".to_string())
        } else if w.start + w.len - 1 > n {
            Some(format!("ends at {} beyond n = {n}", w.start + w.len - 1))
        } else if w.lower > w.upper {
            Some(format!(
                "lower bound {} exceeds upper bound {}",
                w.lower, w.upper
            ))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(SpecError::InvalidWindow {
                window: idx,
                reason,
            });
        }
    }
    Ok(())
}

pub fn is_satisfied(windows: &[WindowSpec], values: &[i64]) -> bool {
    windows.iter().all(|w| {
        let s: i64 = values[w.range()].iter().sum();
        w.lower <= s && s <= w.upper
    })
}

/// Which bound a dual arc encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcOrigin {
    VarLower(usize),
    VarUpper(usize),
    WindowLower(usize),
    WindowUpper(usize),
}

/// Dual flow graph. Node `p` (1-based) is graph node `p - 1`; all supplies
/// are zero so flows are circulations.
#[derive(Clone, Debug)]
pub struct DualGraph {
    graph: Digraph,
    origin: Vec<ArcOrigin>,
    var_lower_arc: Vec<usize>,
    var_upper_arc: Vec<usize>,
}

impl DualGraph {
    pub fn build(
        n: usize,
        windows: &[WindowSpec],
        domains: &IntDomainStore,
    ) -> Result<Self, SpecError> {
        validate_windows(n, windows)?;
        if domains.len() != n {
            return Err(SpecError::WrongArity {
                expected: n,
                actual: domains.len(),
            });
        }
        if let Some(i) = domains.iter().position(|d| d.is_empty()) {
            return Err(SpecError::EmptyDomain(i));
        }
        let magnitude = domains
            .iter()
            .flat_map(|d| [d.lo, d.hi])
            .chain(windows.iter().flat_map(|w| [w.lower, w.upper]))
            .try_fold(0i64, |acc, c| acc.checked_add(c.checked_abs()?))
            .filter(|&m| m <= MAGNITUDE_LIMIT);
        if magnitude.is_none() {
            return Err(crate::flow::FlowError::Overflow.into());
        }

        let mut graph = Digraph::new(n + 1);
        let mut origin = Vec::with_capacity(2 * n + 2 * windows.len());
        let mut var_lower_arc = Vec::with_capacity(n);
        let mut var_upper_arc = Vec::with_capacity(n);
        for (i, d) in domains.iter().enumerate() {
            var_lower_arc.push(graph.add_arc(i, i + 1, -d.lo));
            origin.push(ArcOrigin::VarLower(i));
            var_upper_arc.push(graph.add_arc(i + 1, i, d.hi));
            origin.push(ArcOrigin::VarUpper(i));
        }
        for (idx, w) in windows.iter().enumerate() {
            let s = w.start - 1;
            let e = s + w.len;
            graph.add_arc(s, e, -w.lower);
            origin.push(ArcOrigin::WindowLower(idx));
            graph.add_arc(e, s, w.upper);
            origin.push(ArcOrigin::WindowUpper(idx));
        }
        Ok(Self {
            graph,
            origin,
            var_lower_arc,
            var_upper_arc,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn origin(&self, arc: usize) -> ArcOrigin {
        self.origin[arc]
    }

    pub fn var_lower_arc(&self, i: usize) -> usize {
        self.var_lower_arc[i]
    }

    pub fn var_upper_arc(&self, i: usize) -> usize {
        self.var_upper_arc[i]
    }
}

impl ArcGraph for DualGraph {
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    fn arc_count(&self) -> usize {
        self.graph.arc_count()
    }

    fn endpoints(&self, arc: usize) -> (NodeId, NodeId) {
        self.graph.endpoints(arc)
    }

    fn cost(&self, arc: usize) -> i64 {
        self.graph.cost(arc)
    }

    fn out_arcs(&self, node: NodeId) -> &[usize] {
        self.graph.out_arcs(node)
    }
}

pub fn build_dual_graph(
    n: usize,
    windows: &[WindowSpec],
    domains: &IntDomainStore,
) -> Result<DualGraph, SpecError> {
    DualGraph::build(n, windows, domains)
}

pub fn check_satisfiable(graph: &DualGraph) -> bool {
    find_negative_cycle(graph).is_none()
}

/// Bounds consistency by shortest-path tightening, iterated to a fixpoint.
pub fn propagate_bc(
    n: usize,
    windows: &[WindowSpec],
    domains: &IntDomainStore,
) -> Result<PropagationOutcome<IntDomainStore>, SpecError> {
    let mut store = domains.clone();
    let mut pruned = 0usize;
    loop {
        let graph = DualGraph::build(n, windows, &store)?;
        let Ok(potential) = feasible_potentials(&graph) else {
            return Ok(PropagationOutcome::inconsistent(domains.clone()));
        };
        let mut changed = false;
        let mut next = store.clone();
        // Only d(i, i+1) and d(i+1, i) are needed.
        let rows: Vec<_> = (0..=n)
            .map(|s| dijkstra_with_potentials(&graph, s, &potential))
            .collect();
        for i in 0..n {
            let cur = store.get(i);
            let mut iv = cur;
            if let Some(d) = rows[i][i + 1].finite() {
                iv.lo = iv.lo.max(-d);
            }
            if let Some(d) = rows[i + 1][i].finite() {
                iv.hi = iv.hi.min(d);
            }
            if iv.is_empty() {
                return Ok(PropagationOutcome::inconsistent(domains.clone()));
            }
            if iv != cur {
                pruned += ((iv.lo - cur.lo) + (cur.hi - iv.hi)) as usize;
                next.0[i] = iv;
                changed = true;
            }
        }
        store = next;
        if !changed {
            return Ok(PropagationOutcome::fixpoint(store, pruned));
        }
    }
}

/// `Gen-Sequence` on 0/1 variables through the dual graph; on `{0, 1}`
/// every value is a bound, so BC is DC.
pub fn gen_sequence_propagate(
    n: usize,
    windows: &[WindowSpec],
    domains: &BoolDomainStore,
) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
    domains.check_non_empty()?;
    let out = propagate_bc(n, windows, &IntDomainStore::from_bool(domains))?;
    if !out.is_consistent() {
        return Ok(PropagationOutcome::inconsistent(domains.clone()));
    }
    let store = out.store.to_bool();
    let pruned = domains.removed_since(&store);
    Ok(PropagationOutcome::fixpoint(store, pruned))
}

/// Windows `<l, u, k, s>` for `s = 1..=n-k+1`, i.e. a plain `Sequence`.
pub fn uniform_windows(n: usize, k: usize, l: i64, u: i64) -> Vec<WindowSpec> {
    (1..=n + 1 - k)
        .map(|s| WindowSpec::new(s, k, l, u))
        .collect()
}

impl From<(i64, i64)> for Interval {
    fn from((lo, hi): (i64, i64)) -> Self {
        Interval::new(lo, hi)
    }
}
