//! Decidable relations between a pre-state and a post-state.

use super::pred::{eval_pred, StatePredicate};
use super::state::{Binding, Decls, KernelError, State};
use super::value::{Value, VarName};

/// Operand of an append/prepend relation: a literal value or the pre-state
/// value of a scalar variable (operation parameters like `v`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Item {
    Lit(Value),
    Var(VarName),
}

/// A closed-constructor relation language over (pre, post) state pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum StateRelation {
    /// Holds of every pair.
    Universal,
    /// Every listed variable has equal value in both states.
    Id(Vec<VarName>),
    /// `x' = x`.
    EqPrimed(VarName),
    /// `x' != x`.
    NeqPrimed(VarName),
    /// `x prefixof x'`: the pre-state sequence is a prefix of the post-state.
    PrefixOf(VarName),
    /// `x' suffixof x`: the post-state sequence is a suffix of the pre-state.
    SuffixOf(VarName),
    /// `x' = x ++ [item]`.
    Append(VarName, Item),
    /// `x' = [item] ++ x`.
    Prepend(VarName, Item),
    /// `x = [h'] ++ x'`: the pre-state sequence is the post-state value of
    /// `h` consed onto the post-state sequence.
    ConsHead(VarName, VarName),
    /// Predicate on the pre-state.
    Pre(StatePredicate),
    /// Predicate on the post-state.
    Post(StatePredicate),
    And(Box<StateRelation>, Box<StateRelation>),
    Or(Box<StateRelation>, Box<StateRelation>),
    Not(Box<StateRelation>),
}

impl StateRelation {
    pub fn id(vars: &[&str]) -> Self {
        StateRelation::Id(vars.iter().map(|v| VarName::new(*v)).collect())
    }

    pub fn eq_primed(var: impl Into<String>) -> Self {
        StateRelation::EqPrimed(VarName::new(var))
    }

    pub fn neq_primed(var: impl Into<String>) -> Self {
        StateRelation::NeqPrimed(VarName::new(var))
    }

    pub fn prefix_of(var: impl Into<String>) -> Self {
        StateRelation::PrefixOf(VarName::new(var))
    }

    pub fn suffix_of(var: impl Into<String>) -> Self {
        StateRelation::SuffixOf(VarName::new(var))
    }

    pub fn append_lit(var: impl Into<String>, v: Value) -> Self {
        StateRelation::Append(VarName::new(var), Item::Lit(v))
    }

    pub fn append_var(var: impl Into<String>, item: impl Into<String>) -> Self {
        StateRelation::Append(VarName::new(var), Item::Var(VarName::new(item)))
    }

    pub fn prepend_var(var: impl Into<String>, item: impl Into<String>) -> Self {
        StateRelation::Prepend(VarName::new(var), Item::Var(VarName::new(item)))
    }

    pub fn cons_head(var: impl Into<String>, head: impl Into<String>) -> Self {
        StateRelation::ConsHead(VarName::new(var), VarName::new(head))
    }

    pub fn and(a: StateRelation, b: StateRelation) -> Self {
        StateRelation::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: StateRelation, b: StateRelation) -> Self {
        StateRelation::Or(Box::new(a), Box::new(b))
    }

    pub fn not(r: StateRelation) -> Self {
        StateRelation::Not(Box::new(r))
    }

    /// `p ⇒ q` as `¬p ∨ q`.
    pub fn implies(p: StateRelation, q: StateRelation) -> Self {
        StateRelation::or(StateRelation::not(p), q)
    }

    /// Variables mentioned by the relation.
    pub fn vars(&self) -> Vec<VarName> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarName>) {
        match self {
            StateRelation::Universal => {}
            StateRelation::Id(vs) => out.extend(vs.iter().cloned()),
            StateRelation::EqPrimed(x)
            | StateRelation::NeqPrimed(x)
            | StateRelation::PrefixOf(x)
            | StateRelation::SuffixOf(x) => out.push(x.clone()),
            StateRelation::Append(x, item) | StateRelation::Prepend(x, item) => {
                out.push(x.clone());
                if let Item::Var(v) = item {
                    out.push(v.clone());
                }
            }
            StateRelation::ConsHead(x, h) => {
                out.push(x.clone());
                out.push(h.clone());
            }
            StateRelation::Pre(p) | StateRelation::Post(p) => out.extend(p.vars()),
            StateRelation::And(a, b) | StateRelation::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            StateRelation::Not(r) => r.collect_vars(out),
        }
    }

    /// Reflexivity over an enumerated state set: `r(s, s)` for every state.
    pub fn reflexive_on(&self, decls: &Decls, states: &[State]) -> Result<bool, KernelError> {
        for s in states {
            if !eval_rel(self, decls, s, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn item_value(item: &Item, decls: &Decls, pre: &State) -> Result<Value, KernelError> {
    match item {
        Item::Lit(v) => Ok(*v),
        Item::Var(x) => match pre.get(decls, x)? {
            Binding::Scalar(v) => Ok(*v),
            Binding::Seq(_) => Err(KernelError::KindMismatch(x.clone())),
        },
    }
}

fn seq_of<'a>(
    state: &'a State,
    decls: &Decls,
    x: &VarName,
) -> Result<&'a super::value::SeqVal, KernelError> {
    match state.get(decls, x)? {
        Binding::Seq(s) => Ok(s),
        Binding::Scalar(_) => Err(KernelError::KindMismatch(x.clone())),
    }
}

/// Deterministic relational evaluation over a (pre, post) pair.
pub fn eval_rel(
    r: &StateRelation,
    decls: &Decls,
    pre: &State,
    post: &State,
) -> Result<bool, KernelError> {
    Ok(match r {
        StateRelation::Universal => true,
        StateRelation::Id(vs) => {
            for x in vs {
                if pre.get(decls, x)? != post.get(decls, x)? {
                    return Ok(false);
                }
            }
            true
        }
        StateRelation::EqPrimed(x) => pre.get(decls, x)? == post.get(decls, x)?,
        StateRelation::NeqPrimed(x) => pre.get(decls, x)? != post.get(decls, x)?,
        StateRelation::PrefixOf(x) => seq_of(pre, decls, x)?.prefix_of(seq_of(post, decls, x)?),
        StateRelation::SuffixOf(x) => seq_of(post, decls, x)?.suffix_of(seq_of(pre, decls, x)?),
        StateRelation::Append(x, item) => {
            let v = item_value(item, decls, pre)?;
            *seq_of(post, decls, x)? == seq_of(pre, decls, x)?.append(v)
        }
        StateRelation::Prepend(x, item) => {
            let v = item_value(item, decls, pre)?;
            *seq_of(post, decls, x)? == seq_of(pre, decls, x)?.prepend(v)
        }
        StateRelation::ConsHead(x, h) => {
            let head = match post.get(decls, h)? {
                Binding::Scalar(v) => *v,
                Binding::Seq(_) => return Err(KernelError::KindMismatch(h.clone())),
            };
            *seq_of(pre, decls, x)? == seq_of(post, decls, x)?.prepend(head)
        }
        StateRelation::Pre(p) => eval_pred(p, decls, pre)?,
        StateRelation::Post(p) => eval_pred(p, decls, post)?,
        StateRelation::And(a, b) => {
            eval_rel(a, decls, pre, post)? && eval_rel(b, decls, pre, post)?
        }
        StateRelation::Or(a, b) => eval_rel(a, decls, pre, post)? || eval_rel(b, decls, pre, post)?,
        StateRelation::Not(q) => !eval_rel(q, decls, pre, post)?,
    })
}
