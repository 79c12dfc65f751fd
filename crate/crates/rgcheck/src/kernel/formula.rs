//! Temporal formulas evaluated over finite and lasso traces.

use super::pred::StatePredicate;
use super::rel::StateRelation;

/// Which step kinds a step atom matches.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum StepKindFilter {
    Env,
    Pgm,
    Any,
}

/// A temporal formula over trace positions.
///
/// `StateAtom` reads the state at the current position. `StepAtom` is
/// existential: it holds at a position iff there is a step at that position,
/// its kind matches the filter, and the relation holds of the step. At the
/// final position of a finite trace there is no step, so a step atom is
/// false there; `[]e(r)` is therefore the derived form □¬stepAtom(env, ¬r),
/// which is vacuously true over an empty range of steps.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TemporalFormula {
    True,
    False,
    StateAtom(StatePredicate),
    StepAtom(StepKindFilter, StateRelation),
    Not(Box<TemporalFormula>),
    And(Box<TemporalFormula>, Box<TemporalFormula>),
    Or(Box<TemporalFormula>, Box<TemporalFormula>),
    Eventually(Box<TemporalFormula>),
    Always(Box<TemporalFormula>),
}

impl TemporalFormula {
    pub fn atom(p: StatePredicate) -> Self {
        TemporalFormula::StateAtom(p)
    }

    pub fn step(kind: StepKindFilter, rel: StateRelation) -> Self {
        TemporalFormula::StepAtom(kind, rel)
    }

    pub fn not(f: TemporalFormula) -> Self {
        match f {
            TemporalFormula::True => TemporalFormula::False,
            TemporalFormula::False => TemporalFormula::True,
            TemporalFormula::Not(inner) => *inner,
            other => TemporalFormula::Not(Box::new(other)),
        }
    }

    /// Conjunction with constant folding and duplicate elimination; operands
    /// are kept in canonical (sorted) order so formula progression reaches a
    /// fixed point instead of growing.
    pub fn and(a: TemporalFormula, b: TemporalFormula) -> Self {
        let mut parts = Vec::new();
        collect(a, true, &mut parts);
        collect(b, true, &mut parts);
        parts.sort();
        parts.dedup();
        if parts.iter().any(|p| *p == TemporalFormula::False) {
            return TemporalFormula::False;
        }
        parts.retain(|p| *p != TemporalFormula::True);
        rebuild(parts, true)
    }

    /// Disjunction, normalized like [`TemporalFormula::and`].
    pub fn or(a: TemporalFormula, b: TemporalFormula) -> Self {
        let mut parts = Vec::new();
        collect(a, false, &mut parts);
        collect(b, false, &mut parts);
        parts.sort();
        parts.dedup();
        if parts.iter().any(|p| *p == TemporalFormula::True) {
            return TemporalFormula::True;
        }
        parts.retain(|p| *p != TemporalFormula::False);
        rebuild(parts, false)
    }

    pub fn eventually(f: TemporalFormula) -> Self {
        match f {
            TemporalFormula::True => TemporalFormula::True,
            TemporalFormula::False => TemporalFormula::False,
            other => TemporalFormula::Eventually(Box::new(other)),
        }
    }

    pub fn always(f: TemporalFormula) -> Self {
        match f {
            TemporalFormula::True => TemporalFormula::True,
            TemporalFormula::False => TemporalFormula::False,
            other => TemporalFormula::Always(Box::new(other)),
        }
    }

    /// `[]e(r)`: every environment step satisfies `r`.
    pub fn always_env(rel: StateRelation) -> Self {
        TemporalFormula::always(TemporalFormula::not(TemporalFormula::step(
            StepKindFilter::Env,
            StateRelation::not(rel),
        )))
    }

    /// `<>e(r)`: some environment step satisfies `r`.
    pub fn eventually_env(rel: StateRelation) -> Self {
        TemporalFormula::eventually(TemporalFormula::step(StepKindFilter::Env, rel))
    }

    /// Pushes negation down to atoms, respecting the ◇/□ duality. Atoms may
    /// end up under a single negation (state atoms fold the negation into
    /// the predicate).
    pub fn negation_normal(&self) -> TemporalFormula {
        nnf(self, false)
    }
}

fn collect(f: TemporalFormula, conj: bool, out: &mut Vec<TemporalFormula>) {
    match (f, conj) {
        (TemporalFormula::And(a, b), true) => {
            collect(*a, true, out);
            collect(*b, true, out);
        }
        (TemporalFormula::Or(a, b), false) => {
            collect(*a, false, out);
            collect(*b, false, out);
        }
        (other, _) => out.push(other),
    }
}

fn rebuild(mut parts: Vec<TemporalFormula>, conj: bool) -> TemporalFormula {
    if parts.is_empty() {
        return if conj {
            TemporalFormula::True
        } else {
            TemporalFormula::False
        };
    }
    let mut acc = parts.pop().unwrap();
    while let Some(p) = parts.pop() {
        acc = if conj {
            TemporalFormula::And(Box::new(p), Box::new(acc))
        } else {
            TemporalFormula::Or(Box::new(p), Box::new(acc))
        };
    }
    acc
}

fn nnf(f: &TemporalFormula, negated: bool) -> TemporalFormula {
    match f {
        TemporalFormula::True => {
            if negated {
                TemporalFormula::False
            } else {
                TemporalFormula::True
            }
        }
        TemporalFormula::False => {
            if negated {
                TemporalFormula::True
            } else {
                TemporalFormula::False
            }
        }
        TemporalFormula::StateAtom(p) => {
            if negated {
                TemporalFormula::StateAtom(StatePredicate::not(p.clone()))
            } else {
                TemporalFormula::StateAtom(p.clone())
            }
        }
        TemporalFormula::StepAtom(k, r) => {
            let atom = TemporalFormula::StepAtom(*k, r.clone());
            if negated {
                TemporalFormula::Not(Box::new(atom))
            } else {
                atom
            }
        }
        TemporalFormula::Not(inner) => nnf(inner, !negated),
        TemporalFormula::And(a, b) => {
            if negated {
                TemporalFormula::or(nnf(a, true), nnf(b, true))
            } else {
                TemporalFormula::and(nnf(a, false), nnf(b, false))
            }
        }
        TemporalFormula::Or(a, b) => {
            if negated {
                TemporalFormula::and(nnf(a, true), nnf(b, true))
            } else {
                TemporalFormula::or(nnf(a, false), nnf(b, false))
            }
        }
        TemporalFormula::Eventually(g) => {
            if negated {
                TemporalFormula::always(nnf(g, true))
            } else {
                TemporalFormula::eventually(nnf(g, false))
            }
        }
        TemporalFormula::Always(g) => {
            if negated {
                TemporalFormula::eventually(nnf(g, true))
            } else {
                TemporalFormula::always(nnf(g, false))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn not_eventually_is_always_not() {
        // not <>(qu != []) -> [](qu = []).
        let f = TemporalFormula::not(TemporalFormula::eventually(TemporalFormula::atom(
            StatePredicate::non_empty("qu"),
        )));
        let expected = TemporalFormula::always(TemporalFormula::atom(StatePredicate::not(
            StatePredicate::non_empty("qu"),
        )));
        assert_eq!(f.negation_normal(), expected);
    }

    #[test]
    fn not_quiescence_is_always_eventually_change() {
        // not <>[]e(s' = s) -> []<>e(s' != s).
        let quiesce = TemporalFormula::eventually(TemporalFormula::always_env(
            StateRelation::eq_primed("s"),
        ));
        let f = TemporalFormula::not(quiesce);
        let expected = TemporalFormula::always(TemporalFormula::eventually_env(
            StateRelation::not(StateRelation::eq_primed("s")),
        ));
        assert_eq!(f.negation_normal(), expected);
    }

    #[test]
    fn double_negation_cancels() {
        let p = TemporalFormula::atom(StatePredicate::non_empty("qu"));
        let f = TemporalFormula::not(TemporalFormula::not(p.clone()));
        assert_eq!(f, p);
        assert_eq!(f.negation_normal(), p);
    }

    #[test]
    fn and_or_normalization_reaches_fixed_points() {
        let a = TemporalFormula::atom(StatePredicate::non_empty("qu"));
        let b = TemporalFormula::eventually(a.clone());
        assert_eq!(
            TemporalFormula::and(a.clone(), a.clone()),
            a,
            "idempotence"
        );
        assert_eq!(
            TemporalFormula::and(a.clone(), b.clone()),
            TemporalFormula::and(b.clone(), a.clone()),
            "commutativity via canonical order"
        );
        assert_eq!(TemporalFormula::or(TemporalFormula::False, b.clone()), b);
        assert_eq!(
            TemporalFormula::and(TemporalFormula::False, b.clone()),
            TemporalFormula::False
        );
    }
}
