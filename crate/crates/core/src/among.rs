//! `Among` on 0/1 variables: between `l` and `u` of the listed variables are 1.
//!
//! Used as the decomposition baseline for `Sequence` (one `Among` per window)
//! and, with a per-window cost term, for `SoftSequence`.

use crate::domain::{BoolDomainStore, PropagationOutcome, SpecError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmongSpec {
    pub lower: i64,
    pub upper: i64,
    pub vars: Vec<usize>,
}

impl AmongSpec {
    pub fn new(lower: i64, upper: i64, vars: Vec<usize>) -> Result<Self, SpecError> {
        if lower < 0 || lower > upper || upper > vars.len() as i64 {
            return Err(SpecError::InvalidWindow {
                window: 0,
                reason: format!(
                    "among bounds [{lower}, {upper}] invalid for {} variables",
                    vars.len()
                ),
            });
        }
        Ok(Self { lower, upper, vars })
    }

    /// One `Among(l, u)` per length-`k` window of `n` variables.
    pub fn windows(n: usize, k: usize, l: i64, u: i64) -> Vec<AmongSpec> {
        (0..=n - k)
            .map(|s| AmongSpec {
                lower: l,
                upper: u,
                vars: (s..s + k).collect(),
            })
            .collect()
    }

    /// Number of variables fixed to 1 and number of free variables.
    pub fn counts(&self, domains: &BoolDomainStore) -> (i64, i64) {
        let mut ones = 0;
        let mut free = 0;
        for &v in &self.vars {
            let d = domains.get(v);
            if !d.is_fixed() {
                free += 1;
            } else if d.has_one {
                ones += 1;
            }
        }
        (ones, free)
    }
}

/// DC for a single `Among`.
pub fn among_propagate(
    spec: &AmongSpec,
    domains: &BoolDomainStore,
) -> Result<PropagationOutcome<BoolDomainStore>, SpecError> {
    if let Some(&v) = spec.vars.iter().find(|&&v| v >= domains.len()) {
        return Err(SpecError::WrongArity {
            expected: v + 1,
            actual: domains.len(),
        });
    }
    if let Some(&v) = spec.vars.iter().find(|&&v| domains.get(v).is_empty()) {
        return Err(SpecError::EmptyDomain(v));
    }
    let (c, f) = spec.counts(domains);
    if c > spec.upper || c + f < spec.lower {
        return Ok(PropagationOutcome::inconsistent(domains.clone()));
    }
    let drop = if c == spec.upper {
        Some(1)
    } else if c + f == spec.lower {
        Some(0)
    } else {
        None
    };
    let mut store = domains.clone();
    let mut pruned = 0;
    if let Some(value) = drop {
        for &v in &spec.vars {
            let d = store.get(v);
            if !d.is_fixed() {
                store.set(v, d.without(value));
                pruned += 1;
            }
        }
    }
    Ok(PropagationOutcome::fixpoint(store, pruned))
}

/// Least `max(l - sum, sum - u, 0)` over completions of the current store.
pub fn soft_among_min_cost(spec: &AmongSpec, domains: &BoolDomainStore) -> i64 {
    let (c, f) = spec.counts(domains);
    (spec.lower - (c + f)).max(c - spec.upper).max(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BoolDomain;

    fn store(v: &[BoolDomain]) -> BoolDomainStore {
        BoolDomainStore(v.to_vec())
    }

    #[test]
    fn saturated_prunes_ones() {
        let spec = AmongSpec::new(1, 1, vec![0, 1]).unwrap();
        let out = among_propagate(&spec, &store(&[BoolDomain::ONE, BoolDomain::FREE])).unwrap();
        assert_eq!(out.store.get(1), BoolDomain::ZERO);
    }

    #[test]
    fn demand_forces_ones() {
        let spec = AmongSpec::new(1, 1, vec![0, 1]).unwrap();
        let out = among_propagate(&spec, &store(&[BoolDomain::ZERO, BoolDomain::FREE])).unwrap();
        assert_eq!(out.store.get(1), BoolDomain::ONE);
    }

    #[test]
    fn overfull_is_inconsistent() {
        let spec = AmongSpec::new(0, 1, vec![0, 1]).unwrap();
        let out = among_propagate(&spec, &BoolDomainStore::from_assignment(&[1, 1])).unwrap();
        assert!(!out.is_consistent());
    }

    #[test]
    fn min_cost_examples() {
        let spec = AmongSpec::new(2, 3, vec![0, 1, 2]).unwrap();
        assert_eq!(soft_among_min_cost(&spec, &BoolDomainStore::free(3)), 0);
        let spec = AmongSpec::new(0, 0, vec![0, 1, 2]).unwrap();
        assert_eq!(
            soft_among_min_cost(&spec, &BoolDomainStore::from_assignment(&[1, 1, 1])),
            3
        );
    }

    #[test]
    fn window_decomposition() {
        let w = AmongSpec::windows(5, 3, 1, 2);
        assert_eq!(w.len(), 3);
        assert_eq!(w[2].vars, vec![2, 3, 4]);
    }
}
