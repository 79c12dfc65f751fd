//! Projection of explored runs onto operation windows and conformance
//! checking against specification commands.
//!
//! Each operation instance is checked on its own window: the steps from its
//! first instruction to its completing instruction, with the instance's
//! thread's instructions as program steps and every other thread's as
//! environment steps. Only the specification-level variables are projected
//! (the shared data variable, the pinned parameter `v`, and the instance's
//! result slot as `res`); locks, program counters and snapshots are hidden,
//! so lock traffic and failed CAS attempts appear as stuttering.

use crate::kernel::{Binding, Command, Decls, State, StateSpace, Value, VarDecl, VarName};
use crate::semantics::{accepts, partial_accepts, Verdict};
use crate::traces::{Step, StepKind, Trace};

use super::lts::{Lts, OpInstance, OpKind, Run};

#[derive(Debug, thiserror::Error)]
pub enum ConformanceError {
    #[error("kernel error: {0}")]
    Kernel(#[from] crate::kernel::KernelError),
    #[error("semantics error: {0}")]
    Sem(#[from] crate::semantics::SemError),
}

/// One projected operation window.
#[derive(Clone, Debug)]
pub struct OpWindow {
    pub run_index: usize,
    pub thread: usize,
    pub kind: OpKind,
    pub arg: Option<Value>,
    pub trace: Trace,
    pub decls: Decls,
    /// The window never completes (spinning inside a lasso, a deadlocked
    /// finite run, or a depth-capped run).
    pub complete: bool,
}

/// Declarations of the projected specification state for one instance.
fn spec_decls(lts: &Lts, op: &OpInstance) -> Result<Decls, ConformanceError> {
    let data_decl = lts
        .decls
        .vars()
        .iter()
        .find(|d| d.name == lts.data_var)
        .expect("data variable is declared")
        .clone();
    let mut vars = vec![data_decl];
    if let Some(arg) = op.arg {
        vars.push(VarDecl::scalar("v", vec![arg]));
    }
    if let Some(slot) = &op.result_slot {
        let slot_decl = lts
            .decls
            .vars()
            .iter()
            .find(|d| &d.name == slot)
            .expect("result slot is declared");
        vars.push(VarDecl {
            name: VarName::new("res"),
            kind: slot_decl.kind.clone(),
        });
    }
    Ok(Decls::new(vars))
}

fn project_state(
    lts: &Lts,
    op: &OpInstance,
    decls: &Decls,
    state: &State,
) -> Result<State, ConformanceError> {
    let mut bindings = Vec::with_capacity(decls.len());
    for d in decls.vars() {
        let b = match d.name.as_str() {
            "v" => Binding::Scalar(op.arg.expect("v declared only with an argument")),
            "res" => state
                .get(
                    &lts.decls,
                    op.result_slot.as_ref().expect("res declared only with a slot"),
                )?
                .clone(),
            _ => state.get(&lts.decls, &lts.data_var)?.clone(),
        };
        bindings.push(b);
    }
    Ok(State { bindings })
}

/// Builds the projected window trace of every operation instance in a run.
pub fn window_projections(
    lts: &Lts,
    run: &Run,
    run_index: usize,
) -> Result<Vec<OpWindow>, ConformanceError> {
    let mut out = Vec::new();
    for prog in &lts.threads {
        for op in &prog.ops {
            let (lo, hi) = op.pc_range;
            let mine: Vec<usize> = run
                .steps
                .iter()
                .enumerate()
                .filter(|(_, s)| s.thread == op.thread && s.pre_pc >= lo && s.pre_pc <= hi)
                .map(|(i, _)| i)
                .collect();
            let Some(&first) = mine.first() else {
                continue; // never invoked in this run
            };
            let completing = mine
                .iter()
                .copied()
                .find(|&i| run.steps[i].post_pc > hi);
            let decls = spec_decls(lts, op)?;
            let project = |i: usize| -> Result<Step, ConformanceError> {
                let s = &run.steps[i];
                Ok(Step {
                    kind: if s.thread == op.thread {
                        StepKind::Pgm
                    } else {
                        StepKind::Env
                    },
                    pre: project_state(lts, op, &decls, &s.pre)?,
                    post: project_state(lts, op, &decls, &s.post)?,
                })
            };
            let window = match (completing, run.loop_start) {
                (Some(end), _) => {
                    let steps = (first..=end).map(project).collect::<Result<Vec<_>, _>>()?;
                    OpWindow {
                        run_index,
                        thread: op.thread,
                        kind: op.kind,
                        arg: op.arg,
                        trace: Trace::finite(steps[0].pre.clone(), steps),
                        decls,
                        complete: true,
                    }
                }
                (None, Some(ls)) => {
                    // Incomplete inside a lasso: the projected suffix from
                    // the window start, with the cycle rotated behind it.
                    let n = run.steps.len();
                    let (indices, loop_start) = if first < ls {
                        ((first..n).collect::<Vec<_>>(), ls - first)
                    } else {
                        let mut idx: Vec<usize> = (first..n).collect();
                        idx.extend(ls..first);
                        (idx, 0)
                    };
                    let steps = indices
                        .into_iter()
                        .map(project)
                        .collect::<Result<Vec<_>, _>>()?;
                    OpWindow {
                        run_index,
                        thread: op.thread,
                        kind: op.kind,
                        arg: op.arg,
                        trace: Trace::lasso(steps[0].pre.clone(), steps, loop_start),
                        decls,
                        complete: false,
                    }
                }
                (None, None) => {
                    let steps = (first..run.steps.len())
                        .map(project)
                        .collect::<Result<Vec<_>, _>>()?;
                    OpWindow {
                        run_index,
                        thread: op.thread,
                        kind: op.kind,
                        arg: op.arg,
                        trace: Trace::finite(steps[0].pre.clone(), steps),
                        decls,
                        complete: false,
                    }
                }
            };
            out.push(window);
        }
    }
    Ok(out)
}

/// The whole run from one thread's viewpoint, projected onto the shared
/// data variable: that thread's instructions are program steps, every other
/// thread's are environment steps.
pub fn thread_viewpoint(lts: &Lts, run: &Run, thread: usize) -> Result<Trace, ConformanceError> {
    let project = |state: &State| -> Result<State, ConformanceError> {
        Ok(State {
            bindings: vec![state.get(&lts.decls, &lts.data_var)?.clone()],
        })
    };
    let steps = run
        .steps
        .iter()
        .map(|s| {
            Ok(Step {
                kind: if s.thread == thread {
                    StepKind::Pgm
                } else {
                    StepKind::Env
                },
                pre: project(&s.pre)?,
                post: project(&s.post)?,
            })
        })
        .collect::<Result<Vec<_>, ConformanceError>>()?;
    Ok(Trace::finite(project(&run.init)?, steps))
}

/// A failed window with the verdict that rejected it.
#[derive(Clone, Debug)]
pub struct ConformanceFailure {
    pub window: OpWindow,
    pub verdict: Verdict,
}

#[derive(Debug)]
pub struct ConformanceOutcome {
    pub runs: usize,
    pub windows_checked: u64,
    pub failure: Option<ConformanceFailure>,
}

impl ConformanceOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks every projected window of every run against its operation's
/// specification. A window passes when the spec accepts it or is covered by
/// an abort (for example a broken rely or a failed precondition); incomplete
/// windows of finite runs are checked as prefixes of accepted behaviour.
pub fn conformance(
    lts: &Lts,
    runs: &[Run],
    spec_of: &dyn Fn(&OpWindow) -> Command,
) -> Result<ConformanceOutcome, ConformanceError> {
    let mut windows_checked = 0u64;
    for (ri, run) in runs.iter().enumerate() {
        for window in window_projections(lts, run, ri)? {
            windows_checked += 1;
            let cmd = spec_of(&window);
            let space = StateSpace::new(window.decls.clone())?;
            let ok = if window.complete || window.trace.is_lasso() {
                let v = accepts(&cmd, &window.trace, &space)?;
                if v.is_accepted_or_aborted() {
                    true
                } else {
                    return Ok(ConformanceOutcome {
                        runs: runs.len(),
                        windows_checked,
                        failure: Some(ConformanceFailure { window, verdict: v }),
                    });
                }
            } else {
                partial_accepts(&cmd, &window.trace, &space)?
            };
            if !ok {
                let v = accepts(&cmd, &window.trace, &space)?;
                return Ok(ConformanceOutcome {
                    runs: runs.len(),
                    windows_checked,
                    failure: Some(ConformanceFailure { window, verdict: v }),
                });
            }
        }
    }
    Ok(ConformanceOutcome {
        runs: runs.len(),
        windows_checked,
        failure: None,
    })
}
