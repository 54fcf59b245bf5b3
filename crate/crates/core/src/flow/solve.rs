//! Feasible and min-cost flows with lower bounds and node supplies.
//!
//! Both solvers reduce to an s-t problem: each edge starts at a base flow
//! (its lower bound, or its upper bound when the cost is negative so that no
//! residual arc starts out negative), the resulting node imbalances are
//! attached to a super-source and super-sink, and the instance is feasible
//! iff every super arc can be saturated.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::network::{FlowNetwork, FlowState};
use super::FlowError;

const NONE: usize = usize::MAX;

struct Reduced {
    node_count: usize,
    source: usize,
    sink: usize,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    out: Vec<Vec<usize>>,
    required: i64,
    edge_count: usize,
}

impl Reduced {
    fn new(network: &FlowNetwork, saturate_negative: bool) -> Result<Self, FlowError> {
        if !network.is_balanced() {
            return Err(FlowError::Unbalanced {
                total: network.supplies().iter().sum(),
            });
        }
        let n = network.node_count();
        let mut red = Reduced {
            node_count: n + 2,
            source: n,
            sink: n + 1,
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            out: vec![Vec::new(); n + 2],
            required: 0,
            edge_count: network.edge_count(),
        };
        let mut excess = network.supplies().to_vec();
        for e in network.edges() {
            let base = if saturate_negative && e.cost < 0 {
                e.upper
            } else {
                e.lower
            };
            red.add_pair(e.from, e.to, e.upper - base, base - e.lower, e.cost);
            excess[e.to] += base;
            excess[e.from] -= base;
        }
        for (v, &x) in excess.iter().enumerate() {
            if x > 0 {
                red.add_pair(red.source, v, x, 0, 0);
                red.required += x;
            } else if x < 0 {
                red.add_pair(v, red.sink, -x, 0, 0);
            }
        }
        Ok(red)
    }

    fn add_pair(&mut self, from: usize, to: usize, fwd: i64, bwd: i64, cost: i64) {
        let a = self.to.len();
        self.to.extend([to, from]);
        self.cap.extend([fwd, bwd]);
        self.cost.extend([cost, -cost]);
        self.out[from].push(a);
        self.out[to].push(a + 1);
    }

    fn tail(&self, arc: usize) -> usize {
        self.to[arc ^ 1]
    }

    fn augment(&mut self, pred: &[usize]) -> i64 {
        let mut delta = i64::MAX;
        let mut v = self.sink;
        while v != self.source {
            let a = pred[v];
            delta = delta.min(self.cap[a]);
            v = self.tail(a);
        }
        let mut v = self.sink;
        while v != self.source {
            let a = pred[v];
            self.cap[a] -= delta;
            self.cap[a ^ 1] += delta;
            v = self.tail(a);
        }
        delta
    }

    fn bfs(&self, pred: &mut [usize]) -> bool {
        pred.fill(NONE);
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    pred[v] = a;
                    if v == self.sink {
                        return true;
                    }
                    queue.push_back(v);
                }
            }
        }
        false
    }

    fn dijkstra(&self, potential: &[i64], dist: &mut [i64], pred: &mut [usize]) -> bool {
        dist.fill(i64::MAX);
        pred.fill(NONE);
        let mut done = vec![false; self.node_count];
        let mut heap = BinaryHeap::new();
        dist[self.source] = 0;
        heap.push(Reverse((0i64, self.source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &a in &self.out[u] {
                if self.cap[a] == 0 {
                    continue;
                }
                let v = self.to[a];
                let rc = self.cost[a] + potential[u] - potential[v];
                debug_assert!(rc >= 0);
                if d + rc < dist[v] {
                    dist[v] = d + rc;
                    pred[v] = a;
                    heap.push(Reverse((dist[v], v)));
                }
            }
        }
        done[self.sink]
    }

    fn into_state(self, network: &FlowNetwork) -> FlowState {
        let flow = network
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| e.upper - self.cap[2 * id])
            .collect();
        debug_assert_eq!(self.edge_count, network.edge_count());
        FlowState::from_flows(network, flow)
    }
}

/// Returns a flow within all bounds satisfying every supply, or `None` when
/// none exists. Augmenting paths are found breadth-first.
pub fn find_feasible_flow(network: &FlowNetwork) -> Result<Option<FlowState>, FlowError> {
    let mut red = Reduced::new(network, false)?;
    let mut pred = vec![NONE; red.node_count];
    let mut shipped = 0;
    while shipped < red.required && red.bfs(&mut pred) {
        shipped += red.augment(&pred);
    }
    if shipped < red.required {
        return Ok(None);
    }
    let state = red.into_state(network);
    debug_assert!(state.verify(network).is_ok());
    Ok(Some(state))
}

/// Successive shortest paths with Dijkstra on potential-reduced costs.
/// Returns `None` when no feasible flow exists.
pub fn min_cost_flow(network: &FlowNetwork) -> Result<Option<FlowState>, FlowError> {
    let mut red = Reduced::new(network, true)?;
    let n = red.node_count;
    let mut potential = vec![0i64; n];
    let mut dist = vec![0i64; n];
    let mut pred = vec![NONE; n];
    let mut shipped = 0;
    while shipped < red.required {
        if !red.dijkstra(&potential, &mut dist, &mut pred) {
            return Ok(None);
        }
        for v in 0..n {
            if dist[v] != i64::MAX {
                potential[v] += dist[v];
            }
        }
        shipped += red.augment(&pred);
    }
    let state = red.into_state(network);
    debug_assert!(state.verify(network).is_ok());
    Ok(Some(state))
}
