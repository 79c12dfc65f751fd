//! Decidable single-state predicates.

use super::state::{Binding, Decls, KernelError, State};
use super::value::{SeqVal, Value, VarName};

/// A closed-constructor predicate language over one state, total and
/// deterministic on any state binding the mentioned variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum StatePredicate {
    True,
    False,
    /// `x != []` for a sequence variable.
    NonEmpty(VarName),
    /// `#x < n` for a sequence variable.
    LenLt(VarName, usize),
    /// `x == lit`.
    Eq(VarName, Binding),
    /// `x != lit`.
    Neq(VarName, Binding),
    And(Box<StatePredicate>, Box<StatePredicate>),
    Or(Box<StatePredicate>, Box<StatePredicate>),
    Not(Box<StatePredicate>),
}

impl StatePredicate {
    pub fn non_empty(var: impl Into<String>) -> Self {
        StatePredicate::NonEmpty(VarName::new(var))
    }

    pub fn len_lt(var: impl Into<String>, n: usize) -> Self {
        StatePredicate::LenLt(VarName::new(var), n)
    }

    pub fn eq_scalar(var: impl Into<String>, v: Value) -> Self {
        StatePredicate::Eq(VarName::new(var), Binding::Scalar(v))
    }

    pub fn neq_scalar(var: impl Into<String>, v: Value) -> Self {
        StatePredicate::Neq(VarName::new(var), Binding::Scalar(v))
    }

    pub fn eq_seq(var: impl Into<String>, items: Vec<Value>) -> Self {
        StatePredicate::Eq(VarName::new(var), Binding::Seq(SeqVal(items)))
    }

    pub fn and(a: StatePredicate, b: StatePredicate) -> Self {
        StatePredicate::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: StatePredicate, b: StatePredicate) -> Self {
        StatePredicate::Or(Box::new(a), Box::new(b))
    }

    pub fn not(p: StatePredicate) -> Self {
        StatePredicate::Not(Box::new(p))
    }

    /// Variables mentioned by the predicate.
    pub fn vars(&self) -> Vec<VarName> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarName>) {
        match self {
            StatePredicate::True | StatePredicate::False => {}
            StatePredicate::NonEmpty(x) | StatePredicate::LenLt(x, _) => out.push(x.clone()),
            StatePredicate::Eq(x, _) | StatePredicate::Neq(x, _) => out.push(x.clone()),
            StatePredicate::And(a, b) | StatePredicate::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            StatePredicate::Not(p) => p.collect_vars(out),
        }
    }
}

/// Standard truth evaluation; errors on variables missing from `decls`.
pub fn eval_pred(p: &StatePredicate, decls: &Decls, state: &State) -> Result<bool, KernelError> {
    Ok(match p {
        StatePredicate::True => true,
        StatePredicate::False => false,
        StatePredicate::NonEmpty(x) => match state.get(decls, x)? {
            Binding::Seq(s) => !s.is_empty(),
            Binding::Scalar(_) => return Err(KernelError::KindMismatch(x.clone())),
        },
        StatePredicate::LenLt(x, n) => match state.get(decls, x)? {
            Binding::Seq(s) => s.len() < *n,
            Binding::Scalar(_) => return Err(KernelError::KindMismatch(x.clone())),
        },
        StatePredicate::Eq(x, lit) => state.get(decls, x)? == lit,
        StatePredicate::Neq(x, lit) => state.get(decls, x)? != lit,
        StatePredicate::And(a, b) => eval_pred(a, decls, state)? && eval_pred(b, decls, state)?,
        StatePredicate::Or(a, b) => eval_pred(a, decls, state)? || eval_pred(b, decls, state)?,
        StatePredicate::Not(q) => !eval_pred(q, decls, state)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::state::VarDecl;

    fn qu_state(items: Vec<Value>) -> (Decls, State) {
        let decls = Decls::new(vec![
            VarDecl::seq("qu", vec![Value::Int(1), Value::Int(2)], 2),
            VarDecl::scalar("v", vec![Value::Null, Value::Int(1)]),
        ]);
        let state = State {
            bindings: vec![Binding::Seq(SeqVal(items)), Binding::Scalar(Value::Null)],
        };
        (decls, state)
    }

    #[test]
    fn nonempty_on_nonempty_literal() {
        let (decls, st) = qu_state(vec![Value::Int(1)]);
        assert!(eval_pred(&StatePredicate::non_empty("qu"), &decls, &st).unwrap());
    }

    #[test]
    fn len_lt_boundary() {
        // #qu < 2 with qu=[1,2] is false.
        let (decls, st) = qu_state(vec![Value::Int(1), Value::Int(2)]);
        assert!(!eval_pred(&StatePredicate::len_lt("qu", 2), &decls, &st).unwrap());
    }

    #[test]
    fn neq_null_on_null_is_false() {
        let (decls, st) = qu_state(vec![]);
        assert!(!eval_pred(&StatePredicate::neq_scalar("v", Value::Null), &decls, &st).unwrap());
    }

    #[test]
    fn unbound_var_is_declaration_error() {
        let (decls, st) = qu_state(vec![]);
        assert!(matches!(
            eval_pred(&StatePredicate::non_empty("zz"), &decls, &st),
            Err(KernelError::UnboundVar(_))
        ));
    }

    #[test]
    fn evaluation_is_pure() {
        let (decls, st) = qu_state(vec![Value::Int(1)]);
        let p = StatePredicate::and(
            StatePredicate::non_empty("qu"),
            StatePredicate::not(StatePredicate::len_lt("qu", 1)),
        );
        let first = eval_pred(&p, &decls, &st).unwrap();
        for _ in 0..10 {
            assert_eq!(eval_pred(&p, &decls, &st).unwrap(), first);
        }
    }
}
