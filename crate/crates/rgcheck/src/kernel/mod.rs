//! Finite state model and the command-language abstract syntax.

mod command;
mod formula;
mod pred;
mod rel;
mod state;
mod value;

pub use command::{lint, Command, Frame, Lint};
pub use formula::{StepKindFilter, TemporalFormula};
pub use pred::{eval_pred, StatePredicate};
pub use rel::{eval_rel, Item, StateRelation};
pub use state::{
    enumerate_states, Binding, Decls, KernelError, ResourceDecl, State, StateId, StateSpace,
    VarDecl, VarKind,
};
pub use value::{SeqVal, Value, VarName};
