//! Trailed domain store, propagator adapters and the propagation queue.

use std::collections::VecDeque;

use super::domain::Domain;
use super::model::{Constraint, Model, SequencePropagation, SoftPropagation, VarId};
use crate::among::{among_propagate, soft_among_min_cost, AmongSpec};
use crate::domain::{BoolDomain, BoolDomainStore, IntDomainStore, Interval};
use crate::sequence::{SequencePropagator, SequenceSpec};
use crate::sliding_sum::{gen_sequence_propagate, propagate_bc, uniform_windows, WindowSpec};
use crate::soft::propagate_soft;

/// A domain was wiped out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fail;

type Step = Result<(), Fail>;

#[derive(Clone, Debug)]
pub(crate) struct Store {
    doms: Vec<Domain>,
    trail: Vec<(VarId, Domain)>,
    changed: Vec<VarId>,
}

impl Store {
    fn new(doms: Vec<Domain>) -> Self {
        Self {
            doms,
            trail: Vec::new(),
            changed: Vec::new(),
        }
    }

    pub fn get(&self, v: VarId) -> &Domain {
        &self.doms[v]
    }

    /// Replaces the domain of `v` by a subset `d` of it.
    pub fn update(&mut self, v: VarId, d: Domain) -> Step {
        if d.size() == self.doms[v].size() {
            return Ok(());
        }
        if d.is_empty() {
            return Err(Fail);
        }
        let old = std::mem::replace(&mut self.doms[v], d);
        self.trail.push((v, old));
        self.changed.push(v);
        Ok(())
    }

    pub fn restrict(&mut self, v: VarId, lo: i64, hi: i64) -> Step {
        let d = self.doms[v].restrict(lo, hi);
        self.update(v, d)
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, d) = self.trail.pop().unwrap();
            self.doms[v] = d;
        }
    }

    fn bool_store(&self, vars: &[VarId]) -> BoolDomainStore {
        BoolDomainStore(
            vars.iter()
                .map(|&v| BoolDomain {
                    has_zero: self.doms[v].contains(0),
                    has_one: self.doms[v].contains(1),
                })
                .collect(),
        )
    }

    fn write_bool(&mut self, vars: &[VarId], store: &BoolDomainStore) -> Step {
        for (&v, d) in vars.iter().zip(store.iter()) {
            let nd = self.doms[v].retain(|x| d.contains(x as u8) && (x == 0 || x == 1));
            self.update(v, nd)?;
        }
        Ok(())
    }

    fn interval(&self, v: VarId) -> Interval {
        let d = &self.doms[v];
        Interval::new(d.min().unwrap(), d.max().unwrap())
    }
}

#[derive(Clone, Debug)]
enum Prop {
    SequenceFlow {
        vars: Vec<VarId>,
        prop: Box<SequencePropagator>,
    },
    Among {
        vars: Vec<VarId>,
        spec: AmongSpec,
    },
    GenSequence {
        vars: Vec<VarId>,
        windows: Vec<WindowSpec>,
    },
    SlidingSum {
        vars: Vec<VarId>,
        windows: Vec<WindowSpec>,
    },
    SoftFlow {
        vars: Vec<VarId>,
        spec: SequenceSpec,
        cost: VarId,
    },
    /// Window violation of `vars` is exactly `cost`.
    SoftAmong {
        vars: Vec<VarId>,
        spec: AmongSpec,
        cost: VarId,
    },
    /// `sum(terms) <= total`.
    SumLe {
        terms: Vec<VarId>,
        total: VarId,
    },
    Channel {
        var: VarId,
        view: VarId,
        values: Vec<i64>,
    },
}

impl Prop {
    fn vars(&self) -> Vec<VarId> {
        match self {
            Prop::SequenceFlow { vars, .. }
            | Prop::Among { vars, .. }
            | Prop::GenSequence { vars, .. }
            | Prop::SlidingSum { vars, .. } => vars.clone(),
            Prop::SoftFlow { vars, cost, .. } | Prop::SoftAmong { vars, cost, .. } => {
                vars.iter().copied().chain([*cost]).collect()
            }
            Prop::SumLe { terms, total } => terms.iter().copied().chain([*total]).collect(),
            Prop::Channel { var, view, .. } => vec![*var, *view],
        }
    }

    /// Whether a second call right after a first one can never prune more.
    fn idempotent(&self) -> bool {
        matches!(
            self,
            Prop::SequenceFlow { .. }
                | Prop::GenSequence { .. }
                | Prop::SoftFlow { .. }
                | Prop::Channel { .. }
        )
    }

    fn propagate(&mut self, store: &mut Store) -> Step {
        const BUG: &str = "solver stores never hold empty domains";
        match self {
            Prop::SequenceFlow { vars, prop } => {
                let out = prop.sync(&store.bool_store(vars)).expect(BUG);
                if !out.is_consistent() {
                    return Err(Fail);
                }
                store.write_bool(vars, &out.store)
            }
            Prop::Among { vars, spec } => {
                let out = among_propagate(spec, &store.bool_store(vars)).expect(BUG);
                if !out.is_consistent() {
                    return Err(Fail);
                }
                store.write_bool(vars, &out.store)
            }
            Prop::GenSequence { vars, windows } => {
                let out = gen_sequence_propagate(vars.len(), windows, &store.bool_store(vars))
                    .expect(BUG);
                if !out.is_consistent() {
                    return Err(Fail);
                }
                store.write_bool(vars, &out.store)
            }
            Prop::SlidingSum { vars, windows } => {
                let ints = IntDomainStore(vars.iter().map(|&v| store.interval(v)).collect());
                let out = propagate_bc(vars.len(), windows, &ints).expect(BUG);
                if !out.is_consistent() {
                    return Err(Fail);
                }
                for (&v, iv) in vars.iter().zip(out.store.iter()) {
                    store.restrict(v, iv.lo, iv.hi)?;
                }
                Ok(())
            }
            Prop::SoftFlow { vars, spec, cost } => {
                let out = propagate_soft(spec, &store.bool_store(vars), store.interval(*cost))
                    .expect(BUG);
                if !out.is_consistent() {
                    return Err(Fail);
                }
                store.write_bool(vars, &out.store.x)?;
                store.restrict(*cost, out.store.t.lo, out.store.t.hi)
            }
            Prop::SoftAmong { vars, spec, cost } => soft_among(vars, spec, *cost, store),
            Prop::SumLe { terms, total } => {
                let lows: Vec<i64> = terms.iter().map(|&v| store.interval(v).lo).collect();
                let sum: i64 = lows.iter().sum();
                let hi = store.interval(*total).hi;
                store.restrict(*total, sum, hi)?;
                for (&v, lo) in terms.iter().zip(&lows) {
                    store.restrict(v, i64::MIN, hi - (sum - lo))?;
                }
                Ok(())
            }
            Prop::Channel { var, view, values } => {
                let d = store.get(*view).clone();
                if !d.contains(1) {
                    let nd = store.get(*var).retain(|x| !values.contains(&x));
                    store.update(*var, nd)?;
                }
                if !d.contains(0) {
                    let nd = store.get(*var).retain(|x| values.contains(&x));
                    store.update(*var, nd)?;
                }
                let x = store.get(*var);
                let inside = x.values().iter().any(|v| values.contains(v));
                let outside = x.values().iter().any(|v| !values.contains(v));
                let nd = d.retain(|b| (b == 1 && inside) || (b == 0 && outside));
                store.update(*view, nd)
            }
        }
    }
}

/// DC for one window's soft `Among` with its exact violation in `cost`.
fn soft_among(vars: &[VarId], spec: &AmongSpec, cost: VarId, store: &mut Store) -> Step {
    let local = store.bool_store(vars);
    let (c, f) = spec.counts(&local);
    let min = soft_among_min_cost(spec, &local);
    let max = (spec.lower - c).max(c + f - spec.upper).max(0);
    store.restrict(cost, min, max)?;
    let hi = store.interval(cost).hi;
    let with_one = (spec.lower - (c + f)).max(c + 1 - spec.upper).max(0);
    let with_zero = (spec.lower - (c + f - 1)).max(c - spec.upper).max(0);
    for (&v, d) in vars.iter().zip(local.iter()) {
        if d.is_fixed() {
            continue;
        }
        if with_one > hi {
            store.update(v, store.get(v).without(1))?;
        }
        if with_zero > hi {
            store.update(v, store.get(v).without(0))?;
        }
    }
    Ok(())
}

/// Propagators, their watch lists and a FIFO queue without duplicates.
#[derive(Clone, Debug)]
pub(crate) struct Engine {
    pub store: Store,
    props: Vec<Prop>,
    watchers: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    pub decision: Vec<VarId>,
    pub model_vars: usize,
}

impl Engine {
    pub fn new(model: &Model) -> Self {
        let mut doms: Vec<Domain> = model.vars().iter().map(|d| d.domain.clone()).collect();
        let mut props = Vec::new();
        for c in model.constraints() {
            match c {
                Constraint::Sequence {
                    vars,
                    spec,
                    propagation,
                } => match propagation {
                    SequencePropagation::Flow => props.push(Prop::SequenceFlow {
                        vars: vars.clone(),
                        prop: Box::new(SequencePropagator::new(*spec)),
                    }),
                    SequencePropagation::AmongDecomposition => {
                        for w in AmongSpec::windows(spec.n, spec.k, spec.l, spec.u) {
                            props.push(Prop::Among {
                                vars: w.vars.iter().map(|&i| vars[i]).collect(),
                                spec: AmongSpec {
                                    vars: (0..spec.k).collect(),
                                    ..w
                                },
                            });
                        }
                    }
                    SequencePropagation::Dual => props.push(Prop::GenSequence {
                        vars: vars.clone(),
                        windows: uniform_windows(spec.n, spec.k, spec.l, spec.u),
                    }),
                },
                Constraint::SoftSequence {
                    vars,
                    spec,
                    cost,
                    propagation,
                } => match propagation {
                    SoftPropagation::Flow => props.push(Prop::SoftFlow {
                        vars: vars.clone(),
                        spec: *spec,
                        cost: *cost,
                    }),
                    SoftPropagation::AmongDecomposition => {
                        let mut terms = Vec::new();
                        for w in AmongSpec::windows(spec.n, spec.k, spec.l, spec.u) {
                            doms.push(Domain::interval(0, spec.k as i64));
                            let c = doms.len() - 1;
                            terms.push(c);
                            props.push(Prop::SoftAmong {
                                vars: w.vars.iter().map(|&i| vars[i]).collect(),
                                spec: AmongSpec {
                                    vars: (0..spec.k).collect(),
                                    ..w
                                },
                                cost: c,
                            });
                        }
                        props.push(Prop::SumLe {
                            terms,
                            total: *cost,
                        });
                    }
                },
                Constraint::SlidingSum { vars, windows } => props.push(Prop::SlidingSum {
                    vars: vars.clone(),
                    windows: windows.clone(),
                }),
                Constraint::GenSequence { vars, windows } => props.push(Prop::GenSequence {
                    vars: vars.clone(),
                    windows: windows.clone(),
                }),
                Constraint::Among { vars, lower, upper } => props.push(Prop::Among {
                    vars: vars.clone(),
                    spec: AmongSpec {
                        lower: *lower,
                        upper: *upper,
                        vars: (0..vars.len()).collect(),
                    },
                }),
                Constraint::Channel { var, view, values } => props.push(Prop::Channel {
                    var: *var,
                    view: *view,
                    values: values.clone(),
                }),
            }
        }
        let mut watchers = vec![Vec::new(); doms.len()];
        for (p, prop) in props.iter().enumerate() {
            for v in prop.vars() {
                if watchers[v].last() != Some(&p) {
                    watchers[v].push(p);
                }
            }
        }
        let decision = model
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, d)| d.decision)
            .map(|(v, _)| v)
            .collect();
        let queued = vec![false; props.len()];
        Self {
            store: Store::new(doms),
            props,
            watchers,
            queue: VecDeque::new(),
            queued,
            decision,
            model_vars: model.vars().len(),
        }
    }

    pub fn enqueue_all(&mut self) {
        for p in 0..self.props.len() {
            self.enqueue(p);
        }
    }

    fn enqueue(&mut self, p: usize) {
        if !self.queued[p] {
            self.queued[p] = true;
            self.queue.push_back(p);
        }
    }

    /// Fixes `v` to `value` and wakes its watchers.
    pub fn assign(&mut self, v: VarId, value: i64) -> bool {
        self.store.changed.clear();
        if self.store.restrict(v, value, value).is_err() {
            return false;
        }
        for i in 0..self.watchers[v].len() {
            self.enqueue(self.watchers[v][i]);
        }
        true
    }

    /// Runs the queue to a fixpoint; `false` on a wipe-out.
    pub fn propagate(&mut self) -> bool {
        while let Some(p) = self.queue.pop_front() {
            self.queued[p] = false;
            self.store.changed.clear();
            if self.props[p].propagate(&mut self.store).is_err() {
                for q in self.queue.drain(..) {
                    self.queued[q] = false;
                }
                return false;
            }
            let skip_self = self.props[p].idempotent();
            let changed = std::mem::take(&mut self.store.changed);
            for &v in &changed {
                for i in 0..self.watchers[v].len() {
                    let w = self.watchers[v][i];
                    if !(skip_self && w == p) {
                        self.enqueue(w);
                    }
                }
            }
        }
        true
    }
}
