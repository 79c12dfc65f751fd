//! The specification command language.

use std::collections::BTreeSet;
use std::fmt;

use super::formula::TemporalFormula;
use super::pred::StatePredicate;
use super::rel::StateRelation;
use super::state::{Decls, KernelError, State};
use super::value::VarName;

/// The frame of a specification command: which variables its effectful
/// program step may change. A frameless spec (`All`) constrains no variable,
/// as in the paper's `[g_d]` used by Law guar-with.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Frame {
    All,
    Of(BTreeSet<VarName>),
}

impl Frame {
    pub fn of(vars: &[&str]) -> Self {
        Frame::Of(vars.iter().map(|v| VarName::new(*v)).collect())
    }

    pub fn allows(&self, var: &VarName) -> bool {
        match self {
            Frame::All => true,
            Frame::Of(set) => set.contains(var),
        }
    }
}

/// A command of the specification language.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Command {
    /// Morgan-style specification: stuttering program steps plus at most one
    /// state-changing program step confined to the frame, with `post`
    /// required end-to-end between the command's initial and final states.
    Spec { frame: Frame, post: StateRelation },
    /// Assertion command: aborts if the initial state fails the predicate,
    /// otherwise terminates immediately.
    Pre(StatePredicate),
    /// Assumption on environment steps; the first violating environment step
    /// aborts (anything at all is allowed from that point).
    Rely(StateRelation),
    /// Restriction on every atomic program step.
    Guar(StateRelation),
    /// Weak conjunction: both operate on the same trace, aborting as soon as
    /// either aborts.
    Conj(Box<Command>, Box<Command>),
    Seq(Box<Command>, Box<Command>),
    /// Nondeterministic choice.
    Choice(Box<Command>, Box<Command>),
    /// Zero or more, possibly infinitely many, repetitions.
    IterOmega(Box<Command>),
    /// Resource block: the environment cannot modify `resource` while the
    /// body executes; any amount of stuttering before the body, finite
    /// stuttering after.
    With { resource: VarName, body: Box<Command> },
    /// As `With`, but the body is entered only in states satisfying `guard`;
    /// a false guard releases the resource and retries (weakly fair).
    AwaitWith {
        resource: VarName,
        guard: StatePredicate,
        body: Box<Command>,
    },
    /// One environment step satisfying the relation, surrounded by finite
    /// stuttering; infeasible when no such step occurs.
    EnvAtomic(StateRelation),
    /// Any terminating behaviour.
    Term,
    /// Exactly the traces satisfying the temporal formula.
    Encode(TemporalFormula),
}

impl Command {
    pub fn spec(frame: Frame, post: StateRelation) -> Self {
        Command::Spec { frame, post }
    }

    pub fn pre(p: StatePredicate) -> Self {
        Command::Pre(p)
    }

    pub fn rely(r: StateRelation) -> Self {
        Command::Rely(r)
    }

    pub fn guar(g: StateRelation) -> Self {
        Command::Guar(g)
    }

    pub fn conj(a: Command, b: Command) -> Self {
        Command::Conj(Box::new(a), Box::new(b))
    }

    pub fn seq(a: Command, b: Command) -> Self {
        Command::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Command, b: Command) -> Self {
        Command::Choice(Box::new(a), Box::new(b))
    }

    pub fn iter_omega(c: Command) -> Self {
        Command::IterOmega(Box::new(c))
    }

    pub fn with(resource: impl Into<String>, body: Command) -> Self {
        Command::With {
            resource: VarName::new(resource),
            body: Box::new(body),
        }
    }

    pub fn await_with(resource: impl Into<String>, guard: StatePredicate, body: Command) -> Self {
        Command::AwaitWith {
            resource: VarName::new(resource),
            guard,
            body: Box::new(body),
        }
    }

    pub fn env_atomic(rel: StateRelation) -> Self {
        Command::EnvAtomic(rel)
    }

    /// `terminate t`, which normalizes to `term ⊓ encode ¬t`: must terminate
    /// on traces satisfying `t`, may terminate otherwise.
    pub fn terminate(t: TemporalFormula) -> Self {
        Command::choice(Command::Term, Command::Encode(TemporalFormula::not(t)))
    }

    /// Variables mentioned anywhere in the command.
    pub fn vars(&self) -> Vec<VarName> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarName>) {
        match self {
            Command::Spec { frame, post } => {
                if let Frame::Of(set) = frame {
                    out.extend(set.iter().cloned());
                }
                out.extend(post.vars());
            }
            Command::Pre(p) => out.extend(p.vars()),
            Command::Rely(r) | Command::Guar(r) => out.extend(r.vars()),
            Command::Conj(a, b) | Command::Seq(a, b) | Command::Choice(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Command::IterOmega(c) => c.collect_vars(out),
            Command::With { resource, body } => {
                out.push(resource.clone());
                body.collect_vars(out);
            }
            Command::AwaitWith {
                resource,
                guard,
                body,
            } => {
                out.push(resource.clone());
                out.extend(guard.vars());
                body.collect_vars(out);
            }
            Command::EnvAtomic(r) => out.extend(r.vars()),
            Command::Term => {}
            Command::Encode(tf) => collect_formula_vars(tf, out),
        }
    }
}

fn collect_formula_vars(tf: &TemporalFormula, out: &mut Vec<VarName>) {
    match tf {
        TemporalFormula::True | TemporalFormula::False => {}
        TemporalFormula::StateAtom(p) => out.extend(p.vars()),
        TemporalFormula::StepAtom(_, r) => out.extend(r.vars()),
        TemporalFormula::Not(f) | TemporalFormula::Eventually(f) | TemporalFormula::Always(f) => {
            collect_formula_vars(f, out)
        }
        TemporalFormula::And(a, b) | TemporalFormula::Or(a, b) => {
            collect_formula_vars(a, out);
            collect_formula_vars(b, out);
        }
    }
}

/// Advisory findings about a command; none of these reject it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Lint {
    /// The paper requires guarantees to be reflexive so that stuttering
    /// steps are always permitted.
    NonReflexiveGuar(String),
    /// A specification command outside any `with` has no atomicity
    /// protection; its end-to-end postcondition is exposed to interference.
    BareSpecOutsideWith(String),
}

impl fmt::Display for Lint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lint::NonReflexiveGuar(loc) => {
                write!(f, "guarantee at {loc} is not reflexive over the declared states")
            }
            Lint::BareSpecOutsideWith(loc) => {
                write!(f, "specification command at {loc} is not inside any `with`")
            }
        }
    }
}

/// Checks a command for advisory issues over a declaration context.
pub fn lint(cmd: &Command, decls: &Decls, states: &[State]) -> Result<Vec<Lint>, KernelError> {
    let mut out = Vec::new();
    lint_walk(cmd, decls, states, false, "root", &mut out)?;
    Ok(out)
}

fn lint_walk(
    cmd: &Command,
    decls: &Decls,
    states: &[State],
    in_with: bool,
    path: &str,
    out: &mut Vec<Lint>,
) -> Result<(), KernelError> {
    match cmd {
        Command::Guar(g) => {
            if !g.reflexive_on(decls, states)? {
                out.push(Lint::NonReflexiveGuar(path.to_string()));
            }
        }
        Command::Spec { .. } => {
            if !in_with {
                out.push(Lint::BareSpecOutsideWith(path.to_string()));
            }
        }
        Command::Conj(a, b) | Command::Seq(a, b) | Command::Choice(a, b) => {
            lint_walk(a, decls, states, in_with, &format!("{path}.0"), out)?;
            lint_walk(b, decls, states, in_with, &format!("{path}.1"), out)?;
        }
        Command::IterOmega(c) => lint_walk(c, decls, states, in_with, &format!("{path}.body"), out)?,
        Command::With { body, .. } | Command::AwaitWith { body, .. } => {
            lint_walk(body, decls, states, true, &format!("{path}.body"), out)?;
        }
        _ => {}
    }
    Ok(())
}
