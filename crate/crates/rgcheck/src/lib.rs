//! Rely/guarantee specification commands with a finite trace semantics.
//!
//! The crate models a small wide-spectrum command language (specification
//! commands, preconditions, rely and guarantee commands, weak conjunction,
//! resources via `with`/`await`, omega iteration, environment-atomic steps,
//! `term` and temporal `terminate` clauses) over finite variable valuations.
//! Commands accept or reject finite traces and lasso-shaped infinite traces,
//! and bounded exhaustive checks validate refinement laws, derivation chains,
//! spec equivalences and the conformance of small lock-free / lock-based
//! data-structure models against their specifications.

pub mod casestudies;
pub mod dsl;
pub mod kernel;
pub mod refinement;
pub mod registry;
pub mod semantics;
pub mod temporal;
pub mod traces;

pub use kernel::{
    Binding, Command, Decls, Frame, Item, SeqVal, State, StatePredicate, StateRelation,
    StateSpace, StepKindFilter, TemporalFormula, Value, VarDecl, VarKind, VarName,
};
pub use refinement::{CheckConfig, CheckResult, CheckStatus, Environment};
pub use semantics::{accepts, partial_accepts, Verdict};
pub use traces::{Step, StepKind, Trace, TraceShape};
