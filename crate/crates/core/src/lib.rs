//! Flow-based propagators for the `Sequence` family of global constraints.
//!
//! * [`sequence`]: domain consistency for `Sequence` through a feasible flow.
//! * [`soft`]: `SoftSequence` through a min-cost flow.
//! * [`sliding_sum`]: `SlidingSum` and `Gen-Sequence` through negative cycles
//!   and shortest paths in a dual graph.
//! * [`among`]: the `Among` decomposition baselines.
//! * [`solver`]: a backtracking search harness.
//! * [`oracle`]: brute-force reference implementations for testing.

pub mod among;
pub mod domain;
pub mod flow;
pub mod oracle;
pub mod sequence;
pub mod sliding_sum;
pub mod soft;
pub mod solver;

pub use domain::{
    BoolDomain, BoolDomainStore, CostVarDomain, IntDomainStore, Interval, PropagationOutcome,
    PropagationStatus, SpecError,
};
pub use sequence::{propagate_dc, SequencePropagator, SequenceSpec};
pub use sliding_sum::WindowSpec;
pub use soft::{propagate_soft, violation_cost, SoftSequenceSpec};
