//! Domain stores and propagation results shared by the propagators.

use std::fmt;

use thiserror::Error;

use crate::flow::FlowError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("invalid sequence parameters n={n} k={k} l={l} u={u}: need 1 <= k <= n and 0 <= l <= u <= k")]
    InvalidSequence { n: usize, k: usize, l: i64, u: i64 },
    #[error("invalid window {window}: {reason}")]
    InvalidWindow { window: usize, reason: String },
    #[error("expected {expected} variables, got {actual}")]
    WrongArity { expected: usize, actual: usize },
    #[error("variable {0} has an empty domain")]
    EmptyDomain(usize),
    #[error("variable {0} has a non-Boolean domain")]
    NotBoolean(usize),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Domain of a 0/1 variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoolDomain {
    pub has_zero: bool,
    pub has_one: bool,
}

impl BoolDomain {
    pub const FREE: BoolDomain = BoolDomain {
        has_zero: true,
        has_one: true,
    };
    pub const ZERO: BoolDomain = BoolDomain {
        has_zero: true,
        has_one: false,
    };
    pub const ONE: BoolDomain = BoolDomain {
        has_zero: false,
        has_one: true,
    };
    pub const EMPTY: BoolDomain = BoolDomain {
        has_zero: false,
        has_one: false,
    };

    pub fn fixed(value: u8) -> Self {
        match value {
            0 => Self::ZERO,
            1 => Self::ONE,
            _ => panic!("Boolean value must be 0 or 1, got {value}"),
        }
    }

    pub fn contains(self, value: u8) -> bool {
        match value {
            0 => self.has_zero,
            1 => self.has_one,
            _ => false,
        }
    }

    pub fn is_empty(self) -> bool {
        !self.has_zero && !self.has_one
    }

    pub fn is_fixed(self) -> bool {
        self.has_zero != self.has_one
    }

    /// The single remaining value of a fixed domain.
    pub fn value(self) -> Option<u8> {
        match (self.has_zero, self.has_one) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        }
    }

    pub fn size(self) -> usize {
        self.has_zero as usize + self.has_one as usize
    }

    pub fn without(self, value: u8) -> Self {
        match value {
            0 => BoolDomain {
                has_zero: false,
                ..self
            },
            1 => BoolDomain {
                has_one: false,
                ..self
            },
            _ => self,
        }
    }

    pub fn lower(self) -> u8 {
        if self.has_zero {
            0
        } else {
            1
        }
    }

    pub fn upper(self) -> u8 {
        if self.has_one {
            1
        } else {
            0
        }
    }
}

impl fmt::Debug for BoolDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.has_zero, self.has_one) {
            (true, true) => write!(f, "{{0,1}}"),
            (true, false) => write!(f, "{{0}}"),
            (false, true) => write!(f, "{{1}}"),
            (false, false) => write!(f, "{{}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BoolDomainStore(pub Vec<BoolDomain>);

impl BoolDomainStore {
    pub fn free(n: usize) -> Self {
        Self(vec![BoolDomain::FREE; n])
    }

    pub fn from_assignment(values: &[u8]) -> Self {
        Self(values.iter().map(|&v| BoolDomain::fixed(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> BoolDomain {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, d: BoolDomain) {
        self.0[i] = d;
    }

    pub fn fix(&mut self, i: usize, value: u8) {
        self.0[i] = BoolDomain::fixed(value);
    }

    pub fn iter(&self) -> impl Iterator<Item = BoolDomain> + '_ {
        self.0.iter().copied()
    }

    pub fn check_non_empty(&self) -> Result<(), SpecError> {
        match self.0.iter().position(|d| d.is_empty()) {
            Some(i) => Err(SpecError::EmptyDomain(i)),
            None => Ok(()),
        }
    }

    /// Values present in `self` but not in `other`.
    pub fn removed_since(&self, other: &BoolDomainStore) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.size() - b.size())
            .sum()
    }

    /// The full assignment if every variable is fixed.
    pub fn assignment(&self) -> Option<Vec<u8>> {
        self.0.iter().map(|d| d.value()).collect()
    }
}

/// Closed integer interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn point(v: i64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(self) -> i64 {
        (self.hi - self.lo + 1).max(0)
    }
}

/// Interval of the cost variable of a soft constraint.
pub type CostVarDomain = Interval;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntDomainStore(pub Vec<Interval>);

impl IntDomainStore {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Interval {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.0.iter().copied()
    }

    pub fn from_bool(store: &BoolDomainStore) -> Self {
        Self(
            store
                .iter()
                .map(|d| Interval::new(d.lower() as i64, d.upper() as i64))
                .collect(),
        )
    }

    /// Channels back to 0/1 domains; values outside `{0, 1}` are dropped.
    pub fn to_bool(&self) -> BoolDomainStore {
        BoolDomainStore(
            self.iter()
                .map(|iv| BoolDomain {
                    has_zero: iv.contains(0),
                    has_one: iv.contains(1),
                })
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropagationStatus {
    Fixpoint,
    Inconsistent,
}

/// Result of one propagator call. On `Inconsistent` the store is the input
/// store, untouched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationOutcome<S> {
    pub status: PropagationStatus,
    pub store: S,
    /// Number of domain values (or bound units) removed.
    pub pruned: usize,
    /// Unit-flow repair cycles pushed by incremental propagators.
    pub repairs: usize,
}

impl<S> PropagationOutcome<S> {
    pub fn fixpoint(store: S, pruned: usize) -> Self {
        Self {
            status: PropagationStatus::Fixpoint,
            store,
            pruned,
            repairs: 0,
        }
    }

    pub fn inconsistent(store: S) -> Self {
        Self {
            status: PropagationStatus::Inconsistent,
            store,
            pruned: 0,
            repairs: 0,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.status == PropagationStatus::Fixpoint
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bool_domain_basics() {
        assert!(BoolDomain::FREE.contains(0) && BoolDomain::FREE.contains(1));
        assert_eq!(BoolDomain::FREE.without(1), BoolDomain::ZERO);
        assert_eq!(BoolDomain::ONE.value(), Some(1));
        assert!(BoolDomain::ZERO.without(0).is_empty());
        assert_eq!(format!("{:?}", BoolDomain::FREE), "{0,1}");
    }

    #[test]
    fn channel_round_trip() {
        let s = BoolDomainStore(vec![BoolDomain::FREE, BoolDomain::ONE, BoolDomain::ZERO]);
        assert_eq!(IntDomainStore::from_bool(&s).to_bool(), s);
        assert_eq!(
            s.removed_since(&BoolDomainStore(vec![BoolDomain::ONE; 3])),
            1
        );
    }
}
