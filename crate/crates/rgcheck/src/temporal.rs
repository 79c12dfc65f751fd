//! Exact evaluation of temporal formulas on finite and lasso traces.
//!
//! Lassos are evaluated on their infinite unrolling: positions of the prefix
//! and one copy of the cycle suffice because two cycle positions one period
//! apart have identical futures. Finite traces use the convention that
//! `always` ranges over all positions, `eventually` needs a witness
//! position, and a step atom at the final position (no step) is false.

use std::collections::HashMap;

use crate::kernel::{
    eval_pred, eval_rel, Decls, KernelError, State, StepKindFilter, TemporalFormula,
};
use crate::traces::{Step, StepKind, Trace, TraceShape};

fn kind_matches(filter: StepKindFilter, kind: StepKind) -> bool {
    match filter {
        StepKindFilter::Any => true,
        StepKindFilter::Env => kind == StepKind::Env,
        StepKindFilter::Pgm => kind == StepKind::Pgm,
    }
}

/// View of a trace as a (possibly ultimately periodic) position sequence.
struct PositionView<'a> {
    trace: &'a Trace,
    decls: &'a Decls,
    /// Total number of distinct positions: len+1 for finite traces (the
    /// final position has no step), len for lassos (every position steps).
    positions: usize,
    loop_start: Option<usize>,
}

impl<'a> PositionView<'a> {
    fn new(trace: &'a Trace, decls: &'a Decls) -> Self {
        let (positions, loop_start) = match trace.shape {
            TraceShape::Finite => (trace.len() + 1, None),
            TraceShape::Lasso { loop_start } => (trace.len(), Some(loop_start)),
        };
        PositionView {
            trace,
            decls,
            positions,
            loop_start,
        }
    }

    fn state(&self, pos: usize) -> &State {
        self.trace.state_at(pos)
    }

    fn step(&self, pos: usize) -> Option<&Step> {
        self.trace.steps.get(pos)
    }

    /// Positions whose futures must be inspected from `pos` on: for finite
    /// traces everything from `pos`; for lassos the remaining prefix plus
    /// the whole cycle once `pos` can see it.
    fn future(&self, pos: usize) -> Vec<usize> {
        match self.loop_start {
            None => (pos..self.positions).collect(),
            Some(ls) => {
                if pos < ls {
                    (pos..self.positions).collect()
                } else {
                    (ls..self.positions).collect()
                }
            }
        }
    }
}

fn eval_at(
    f: &TemporalFormula,
    view: &PositionView<'_>,
    pos: usize,
    memo: &mut HashMap<(usize, usize), bool>,
    ids: &mut Vec<*const TemporalFormula>,
) -> Result<bool, KernelError> {
    // Identity of the subformula node is a stable memo key within one call.
    let ptr = f as *const TemporalFormula;
    let fid = match ids.iter().position(|p| *p == ptr) {
        Some(i) => i,
        None => {
            ids.push(ptr);
            ids.len() - 1
        }
    };
    if let Some(&v) = memo.get(&(fid, pos)) {
        return Ok(v);
    }
    let value = match f {
        TemporalFormula::True => true,
        TemporalFormula::False => false,
        TemporalFormula::StateAtom(p) => eval_pred(p, view.decls, view.state(pos))?,
        TemporalFormula::StepAtom(filter, rel) => match view.step(pos) {
            None => false,
            Some(step) => {
                kind_matches(*filter, step.kind)
                    && eval_rel(rel, view.decls, &step.pre, &step.post)?
            }
        },
        TemporalFormula::Not(g) => !eval_at(g, view, pos, memo, ids)?,
        TemporalFormula::And(a, b) => {
            eval_at(a, view, pos, memo, ids)? && eval_at(b, view, pos, memo, ids)?
        }
        TemporalFormula::Or(a, b) => {
            eval_at(a, view, pos, memo, ids)? || eval_at(b, view, pos, memo, ids)?
        }
        TemporalFormula::Eventually(g) => {
            let mut found = false;
            for j in view.future(pos) {
                if eval_at(g, view, j, memo, ids)? {
                    found = true;
                    break;
                }
            }
            found
        }
        TemporalFormula::Always(g) => {
            let mut all = true;
            for j in view.future(pos) {
                if !eval_at(g, view, j, memo, ids)? {
                    all = false;
                    break;
                }
            }
            all
        }
    };
    memo.insert((fid, pos), value);
    Ok(value)
}

/// Evaluates `tf` at position `pos` of the trace (for lassos, of the
/// infinite unrolling; `pos` must be < prefix+cycle length).
pub fn eval_temporal_at(
    tf: &TemporalFormula,
    trace: &Trace,
    decls: &Decls,
    pos: usize,
) -> Result<bool, KernelError> {
    let view = PositionView::new(trace, decls);
    debug_assert!(pos < view.positions.max(1));
    let mut memo = HashMap::new();
    let mut ids = Vec::new();
    eval_at(tf, &view, pos.min(view.positions.saturating_sub(1)), &mut memo, &mut ids)
}

/// Exact truth value of `tf` on the whole trace.
pub fn eval_temporal(
    tf: &TemporalFormula,
    trace: &Trace,
    decls: &Decls,
) -> Result<bool, KernelError> {
    eval_temporal_at(tf, trace, decls, 0)
}

/// One step of formula progression: the returned formula holds of the rest
/// of the trace iff the input holds of the trace beginning with `step`.
/// Exact for both finite continuations and infinite ones.
pub fn progress(
    tf: &TemporalFormula,
    decls: &Decls,
    step: &Step,
) -> Result<TemporalFormula, KernelError> {
    Ok(match tf {
        TemporalFormula::True => TemporalFormula::True,
        TemporalFormula::False => TemporalFormula::False,
        TemporalFormula::StateAtom(p) => {
            if eval_pred(p, decls, &step.pre)? {
                TemporalFormula::True
            } else {
                TemporalFormula::False
            }
        }
        TemporalFormula::StepAtom(filter, rel) => {
            if kind_matches(*filter, step.kind) && eval_rel(rel, decls, &step.pre, &step.post)? {
                TemporalFormula::True
            } else {
                TemporalFormula::False
            }
        }
        TemporalFormula::Not(g) => TemporalFormula::not(progress(g, decls, step)?),
        TemporalFormula::And(a, b) => {
            TemporalFormula::and(progress(a, decls, step)?, progress(b, decls, step)?)
        }
        TemporalFormula::Or(a, b) => {
            TemporalFormula::or(progress(a, decls, step)?, progress(b, decls, step)?)
        }
        TemporalFormula::Eventually(g) => {
            TemporalFormula::or(progress(g, decls, step)?, tf.clone())
        }
        TemporalFormula::Always(g) => TemporalFormula::and(progress(g, decls, step)?, tf.clone()),
    })
}

/// Truth of `tf` on the zero-step remainder consisting of `state` alone.
pub fn final_eval(
    tf: &TemporalFormula,
    decls: &Decls,
    state: &State,
) -> Result<bool, KernelError> {
    Ok(match tf {
        TemporalFormula::True => true,
        TemporalFormula::False => false,
        TemporalFormula::StateAtom(p) => eval_pred(p, decls, state)?,
        TemporalFormula::StepAtom(..) => false,
        TemporalFormula::Not(g) => !final_eval(g, decls, state)?,
        TemporalFormula::And(a, b) => {
            final_eval(a, decls, state)? && final_eval(b, decls, state)?
        }
        TemporalFormula::Or(a, b) => final_eval(a, decls, state)? || final_eval(b, decls, state)?,
        TemporalFormula::Eventually(g) | TemporalFormula::Always(g) => {
            final_eval(g, decls, state)?
        }
    })
}
