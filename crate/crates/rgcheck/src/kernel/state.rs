//! Variable declarations, states and exhaustive state enumeration.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::value::{SeqVal, Value, VarName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("variable `{0}` is not declared")]
    UnboundVar(VarName),
    #[error("variable `{0}` has the wrong kind for this operation")]
    KindMismatch(VarName),
    #[error("configuration error: {0}")]
    Config(String),
}

/// The declared domain of one variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VarKind {
    Scalar { domain: Vec<Value> },
    Seq { elems: Vec<Value>, cap: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarDecl {
    pub name: VarName,
    pub kind: VarKind,
}

impl VarDecl {
    pub fn scalar(name: impl Into<String>, domain: Vec<Value>) -> Self {
        VarDecl {
            name: VarName::new(name),
            kind: VarKind::Scalar { domain },
        }
    }

    pub fn seq(name: impl Into<String>, elems: Vec<Value>, cap: usize) -> Self {
        VarDecl {
            name: VarName::new(name),
            kind: VarKind::Seq { elems, cap },
        }
    }
}

/// An ordered declaration context. Variable order fixes the canonical
/// enumeration order of states.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Decls {
    vars: Vec<VarDecl>,
}

impl Decls {
    pub fn new(vars: Vec<VarDecl>) -> Self {
        Decls { vars }
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &VarName) -> Result<usize, KernelError> {
        self.vars
            .iter()
            .position(|d| &d.name == name)
            .ok_or_else(|| KernelError::UnboundVar(name.clone()))
    }

    pub fn contains(&self, name: &VarName) -> bool {
        self.vars.iter().any(|d| &d.name == name)
    }
}

/// The value bound to one variable in a state.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Binding {
    Scalar(Value),
    Seq(SeqVal),
}

impl Binding {
    pub fn as_scalar(&self) -> Option<Value> {
        match self {
            Binding::Scalar(v) => Some(*v),
            Binding::Seq(_) => None,
        }
    }

    pub fn as_seq(&self) -> Option<&SeqVal> {
        match self {
            Binding::Seq(s) => Some(s),
            Binding::Scalar(_) => None,
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Scalar(v) => write!(f, "{v}"),
            Binding::Seq(s) => write!(f, "{s}"),
        }
    }
}

/// A total valuation of the declared variables, bindings parallel to the
/// declaration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct State {
    pub bindings: Vec<Binding>,
}

impl State {
    pub fn get<'a>(&'a self, decls: &Decls, name: &VarName) -> Result<&'a Binding, KernelError> {
        Ok(&self.bindings[decls.index_of(name)?])
    }

    /// Sorted `var=value` rendering used by the trace serialization format.
    pub fn render(&self, decls: &Decls) -> String {
        let mut pairs: Vec<(String, String)> = decls
            .vars()
            .iter()
            .zip(&self.bindings)
            .map(|(d, b)| (d.name.0.clone(), b.to_string()))
            .collect();
        pairs.sort();
        pairs
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Identifier of an interned state within a [`StateSpace`].
pub type StateId = u32;

fn enumerate_domain(kind: &VarKind) -> Result<Vec<Binding>, KernelError> {
    match kind {
        VarKind::Scalar { domain } => {
            if domain.is_empty() {
                return Err(KernelError::Config("scalar domain is empty".into()));
            }
            let mut d = domain.clone();
            d.sort();
            d.dedup();
            Ok(d.into_iter().map(Binding::Scalar).collect())
        }
        VarKind::Seq { elems, cap } => {
            let mut e = elems.clone();
            e.sort();
            e.dedup();
            // All sequences of length <= cap, ordered by length then
            // lexicographically.
            let mut out = vec![SeqVal::empty()];
            let mut layer = vec![SeqVal::empty()];
            for _ in 0..*cap {
                let mut next = Vec::new();
                for s in &layer {
                    for v in &e {
                        next.push(s.append(*v));
                    }
                }
                out.extend(next.iter().cloned());
                layer = next;
            }
            Ok(out.into_iter().map(Binding::Seq).collect())
        }
    }
}

/// Returns exactly the set of well-formed states over `decls`, in canonical
/// order (cartesian product, last variable varying fastest).
pub fn enumerate_states(decls: &Decls) -> Result<Vec<State>, KernelError> {
    let mut domains = Vec::with_capacity(decls.len());
    for d in decls.vars() {
        domains.push(enumerate_domain(&d.kind)?);
    }
    let mut states = vec![State {
        bindings: Vec::new(),
    }];
    for dom in &domains {
        let mut next = Vec::with_capacity(states.len() * dom.len());
        for st in &states {
            for b in dom {
                let mut bindings = st.bindings.clone();
                bindings.push(b.clone());
                next.push(State { bindings });
            }
        }
        states = next;
    }
    Ok(states)
}

/// A resource declaration: a shared variable with a data-type invariant
/// established by its initialisation and maintained by every operation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResourceDecl {
    pub var: VarName,
    pub invariant: super::pred::StatePredicate,
    pub initially: super::pred::StatePredicate,
}

impl ResourceDecl {
    /// Checks over the enumerated universe that every state satisfying
    /// `initially` satisfies the invariant.
    pub fn initially_establishes_invariant(&self, decls: &Decls) -> Result<bool, KernelError> {
        for state in enumerate_states(decls)? {
            if super::pred::eval_pred(&self.initially, decls, &state)?
                && !super::pred::eval_pred(&self.invariant, decls, &state)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A declaration context together with its fully enumerated, interned state
/// set. Read-only after construction; shared freely across checker workers.
#[derive(Debug)]
pub struct StateSpace {
    decls: Decls,
    states: Vec<State>,
    index: HashMap<State, StateId>,
}

impl StateSpace {
    pub fn new(decls: Decls) -> Result<Self, KernelError> {
        let states = enumerate_states(&decls)?;
        if states.len() > u32::MAX as usize {
            return Err(KernelError::Config("state space too large".into()));
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as StateId))
            .collect();
        Ok(StateSpace {
            decls,
            states,
            index,
        })
    }

    pub fn decls(&self) -> &Decls {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, id: StateId) -> &State {
        &self.states[id as usize]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn id_of(&self, state: &State) -> Option<StateId> {
        self.index.get(state).copied()
    }
}
