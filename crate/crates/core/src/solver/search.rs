//! Depth-first search with random variable and value ordering.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::{Model, VarId};
use super::propagators::Engine;

/// The search PRNG: ChaCha with 8 rounds, seeded through `seed_from_u64`.
pub type SearchRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    /// Value assignments tried.
    pub nodes: u64,
    /// Assignments whose propagation failed.
    pub backtracks: u64,
    pub status: SolveStatus,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    /// One value per model variable when `stats.status` is `Sat`.
    pub solution: Option<Vec<i64>>,
    pub stats: SearchStats,
}

struct Frame {
    var: VarId,
    values: Vec<i64>,
    next: usize,
    mark: usize,
}

/// Finds one solution. Identical `(model, seed)` give identical node and
/// backtrack counts.
pub fn solve(model: &Model, seed: u64, limits: &Limits) -> SolveResult {
    let start = Instant::now();
    let mut rng = SearchRng::seed_from_u64(seed);
    let mut engine = Engine::new(model);
    let mut nodes = 0u64;
    let mut backtracks = 0u64;
    let finish = |status, solution, nodes, backtracks| SolveResult {
        solution,
        stats: SearchStats {
            nodes,
            backtracks,
            status,
            elapsed: start.elapsed(),
        },
    };

    engine.enqueue_all();
    if !engine.propagate() {
        return finish(SolveStatus::Unsat, None, nodes, backtracks);
    }
    let mut stack: Vec<Frame> = Vec::new();
    'descend: loop {
        let open: Vec<VarId> = engine
            .decision
            .iter()
            .copied()
            .filter(|&v| !engine.store.get(v).is_fixed())
            .collect();
        if open.is_empty() {
            let solution = (0..engine.model_vars)
                .map(|v| engine.store.get(v).min().expect("non-empty domain"))
                .collect();
            return finish(SolveStatus::Sat, Some(solution), nodes, backtracks);
        }
        let var = open[rng.random_range(0..open.len())];
        let mut values = engine.store.get(var).values();
        values.shuffle(&mut rng);
        stack.push(Frame {
            var,
            values,
            next: 0,
            mark: engine.store.mark(),
        });
        loop {
            let Some(frame) = stack.last_mut() else {
                return finish(SolveStatus::Unsat, None, nodes, backtracks);
            };
            if frame.next == frame.values.len() {
                let mark = frame.mark;
                stack.pop();
                engine.store.undo(mark);
                continue;
            }
            let over_nodes = limits.max_nodes.is_some_and(|m| nodes >= m);
            let over_time = limits.timeout.is_some_and(|t| start.elapsed() >= t);
            if over_nodes || over_time {
                return finish(SolveStatus::Limit, None, nodes, backtracks);
            }
            let value = frame.values[frame.next];
            frame.next += 1;
            let var = frame.var;
            engine.store.undo(frame.mark);
            nodes += 1;
            if engine.assign(var, value) && engine.propagate() {
                continue 'descend;
            }
            backtracks += 1;
        }
    }
}
