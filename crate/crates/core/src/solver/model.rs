//! Variable and constraint declarations.

use thiserror::Error;

use super::domain::Domain;
use crate::among::AmongSpec;
use crate::domain::SpecError;
use crate::sequence::SequenceSpec;
use crate::sliding_sum::{self, validate_windows, WindowSpec};
use crate::soft::violation_cost;

pub type VarId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("variable {0} is not declared")]
    UnknownVar(VarId),
    #[error("variable {0} must have a domain within {{0, 1}}")]
    NotBoolean(VarId),
    #[error("variable {0} has an empty domain")]
    EmptyDomain(VarId),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub domain: Domain,
    /// Branched on by the search.
    pub decision: bool,
}

/// How a hard `Sequence` is propagated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequencePropagation {
    /// Flow-based DC with incremental repair.
    Flow,
    /// One `Among` per window.
    AmongDecomposition,
    /// Uniform windows through the `SlidingSum` dual graph.
    Dual,
}

/// How a `SoftSequence` is propagated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SoftPropagation {
    /// Min-cost-flow DC on the variables, BC on the cost.
    Flow,
    /// Per-window soft `Among` cost variables summed into the cost.
    AmongDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Sequence {
        vars: Vec<VarId>,
        spec: SequenceSpec,
        propagation: SequencePropagation,
    },
    /// Total window violation of `vars` is at most `cost`.
    SoftSequence {
        vars: Vec<VarId>,
        spec: SequenceSpec,
        cost: VarId,
        propagation: SoftPropagation,
    },
    SlidingSum {
        vars: Vec<VarId>,
        windows: Vec<WindowSpec>,
    },
    GenSequence {
        vars: Vec<VarId>,
        windows: Vec<WindowSpec>,
    },
    Among {
        vars: Vec<VarId>,
        lower: i64,
        upper: i64,
    },
    /// `view = 1` iff `var` takes a value in `values`.
    Channel {
        var: VarId,
        view: VarId,
        values: Vec<i64>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    vars: Vec<VarDecl>,
    constraints: Vec<Constraint>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_var(&mut self, domain: Domain, decision: bool) -> VarId {
        self.vars.push(VarDecl { domain, decision });
        self.vars.len() - 1
    }

    pub fn add_bool_var(&mut self) -> VarId {
        self.add_var(Domain::boolean(), true)
    }

    pub fn add_bool_vars(&mut self, n: usize) -> Vec<VarId> {
        (0..n).map(|_| self.add_bool_var()).collect()
    }

    pub fn add_int_var(&mut self, lo: i64, hi: i64) -> VarId {
        self.add_var(Domain::interval(lo, hi), true)
    }

    /// Cost variables are not branched on.
    pub fn add_cost_var(&mut self, lo: i64, hi: i64) -> VarId {
        self.add_var(Domain::interval(lo, hi), false)
    }

    /// A 0/1 view of `var` that is 1 iff `var` takes a value in `values`.
    pub fn channel(&mut self, var: VarId, values: &[i64]) -> Result<VarId, ModelError> {
        self.check_var(var)?;
        let view = self.add_var(Domain::boolean(), false);
        self.constraints.push(Constraint::Channel {
            var,
            view,
            values: values.to_vec(),
        });
        Ok(view)
    }

    pub fn add_sequence(
        &mut self,
        vars: &[VarId],
        k: usize,
        l: i64,
        u: i64,
        propagation: SequencePropagation,
    ) -> Result<(), ModelError> {
        let spec = SequenceSpec::new(vars.len(), k, l, u)?;
        self.check_bool(vars)?;
        self.constraints.push(Constraint::Sequence {
            vars: vars.to_vec(),
            spec,
            propagation,
        });
        Ok(())
    }

    pub fn add_soft_sequence(
        &mut self,
        vars: &[VarId],
        k: usize,
        l: i64,
        u: i64,
        cost: VarId,
        propagation: SoftPropagation,
    ) -> Result<(), ModelError> {
        let spec = SequenceSpec::new(vars.len(), k, l, u)?;
        self.check_bool(vars)?;
        self.check_var(cost)?;
        self.constraints.push(Constraint::SoftSequence {
            vars: vars.to_vec(),
            spec,
            cost,
            propagation,
        });
        Ok(())
    }

    pub fn add_sliding_sum(
        &mut self,
        vars: &[VarId],
        windows: &[WindowSpec],
    ) -> Result<(), ModelError> {
        validate_windows(vars.len(), windows)?;
        vars.iter().try_for_each(|&v| self.check_var(v))?;
        self.constraints.push(Constraint::SlidingSum {
            vars: vars.to_vec(),
            windows: windows.to_vec(),
        });
        Ok(())
    }

    pub fn add_gen_sequence(
        &mut self,
        vars: &[VarId],
        windows: &[WindowSpec],
    ) -> Result<(), ModelError> {
        validate_windows(vars.len(), windows)?;
        self.check_bool(vars)?;
        self.constraints.push(Constraint::GenSequence {
            vars: vars.to_vec(),
            windows: windows.to_vec(),
        });
        Ok(())
    }

    pub fn add_among(&mut self, vars: &[VarId], lower: i64, upper: i64) -> Result<(), ModelError> {
        AmongSpec::new(lower, upper, (0..vars.len()).collect())?;
        self.check_bool(vars)?;
        self.constraints.push(Constraint::Among {
            vars: vars.to_vec(),
            lower,
            upper,
        });
        Ok(())
    }

    fn check_var(&self, v: VarId) -> Result<(), ModelError> {
        match self.vars.get(v) {
            None => Err(ModelError::UnknownVar(v)),
            Some(d) if d.domain.is_empty() => Err(ModelError::EmptyDomain(v)),
            Some(_) => Ok(()),
        }
    }

    fn check_bool(&self, vars: &[VarId]) -> Result<(), ModelError> {
        for &v in vars {
            self.check_var(v)?;
            let d = &self.vars[v].domain;
            if d.min() < Some(0) || d.max() > Some(1) {
                return Err(ModelError::NotBoolean(v));
            }
        }
        Ok(())
    }
}

/// Evaluates every constraint and domain of `model` on `values` directly.
pub fn check_solution(model: &Model, values: &[i64]) -> bool {
    if values.len() != model.vars.len()
        || model
            .vars
            .iter()
            .zip(values)
            .any(|(d, &v)| !d.domain.contains(v))
    {
        return false;
    }
    let pick = |vars: &[VarId]| vars.iter().map(|&v| values[v]).collect::<Vec<_>>();
    let bits = |vars: &[VarId]| vars.iter().map(|&v| values[v] as u8).collect::<Vec<_>>();
    model.constraints.iter().all(|c| match c {
        Constraint::Sequence { vars, spec, .. } => spec.is_satisfied(&bits(vars)),
        Constraint::SoftSequence {
            vars, spec, cost, ..
        } => violation_cost(spec, &bits(vars)) <= values[*cost],
        Constraint::SlidingSum { vars, windows } | Constraint::GenSequence { vars, windows } => {
            sliding_sum::is_satisfied(windows, &pick(vars))
        }
        Constraint::Among { vars, lower, upper } => {
            let s: i64 = pick(vars).iter().sum();
            *lower <= s && s <= *upper
        }
        Constraint::Channel {
            var,
            view,
            values: set,
        } => (values[*view] == 1) == set.contains(&values[*var]),
    })
}
