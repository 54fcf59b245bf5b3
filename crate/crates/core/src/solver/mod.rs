//! A small backtracking solver: trailed bitset domains, a FIFO propagation
//! queue over constraint instances, and seeded random search.

mod domain;
mod model;
mod propagators;
mod search;

pub use domain::Domain;
pub use model::{
    check_solution, Constraint, Model, ModelError, SequencePropagation, SoftPropagation, VarDecl,
    VarId,
};
pub use search::{solve, Limits, SearchRng, SearchStats, SolveResult, SolveStatus};
