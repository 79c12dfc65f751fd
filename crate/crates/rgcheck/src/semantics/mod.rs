//! Whether a trace is a behaviour of a command.

pub(crate) mod inf;
pub(crate) mod machine;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::kernel::{Command, StateId, StateSpace};
use crate::traces::{StepKind, Trace, TraceShape};

pub use machine::{Machine, SemError};

use inf::{InfCtx, InfVerdict};
use machine::{CfgId, CFG_EMPTY};

/// Outcome of matching a trace against a command.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    AcceptedTerminated,
    AcceptedInfinite,
    /// The command aborts at this step position; anything at all is allowed
    /// from that point on.
    AbortedAt(usize),
    /// Not a behaviour; `at` is the earliest failing position under the
    /// deterministic matching order.
    Rejected { at: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::AcceptedTerminated | Verdict::AcceptedInfinite)
    }

    pub fn is_accepted_or_aborted(&self) -> bool {
        !matches!(self, Verdict::Rejected { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AcceptedTerminated => write!(f, "accepted-terminated"),
            Verdict::AcceptedInfinite => write!(f, "accepted-infinite"),
            Verdict::AbortedAt(i) => write!(f, "aborted@{i}"),
            Verdict::Rejected { at, reason } => write!(f, "rejected@{at}: {reason}"),
        }
    }
}

/// Matches a trace against a command over the given state space.
pub fn accepts(cmd: &Command, trace: &Trace, space: &StateSpace) -> Result<Verdict, SemError> {
    let mut machine = Machine::new(space);
    let root = machine.compile(cmd)?;
    accepts_in(&mut machine, root, trace)
}

/// As [`accepts`], reusing an existing machine (and its caches).
pub fn accepts_in(
    machine: &mut Machine<'_>,
    root: machine::CmdId,
    trace: &Trace,
) -> Result<Verdict, SemError> {
    if !trace.well_formed() {
        return Err(SemError::IllFormedTrace);
    }
    match trace.shape {
        TraceShape::Finite => accepts_finite(machine, root, trace),
        TraceShape::Lasso { .. } => accepts_lasso(machine, root, trace),
    }
}

fn accepts_finite(
    machine: &mut Machine<'_>,
    root: machine::CmdId,
    trace: &Trace,
) -> Result<Verdict, SemError> {
    let s0 = machine.state_id(&trace.init, 0)?;
    if trace.is_empty() {
        let eps = machine.eps(root, s0)?;
        return Ok(if eps.acc {
            Verdict::AcceptedTerminated
        } else if eps.abort {
            Verdict::AbortedAt(0)
        } else {
            Verdict::Rejected {
                at: 0,
                reason: "command has no empty behaviour from this state".into(),
            }
        });
    }
    let (mut cfg, abort0) = machine.start(root, s0)?;
    let mut aborted_at = if abort0 { Some(0) } else { None };
    let mut dead_at = None;
    let mut final_state = s0;
    for (i, step) in trace.steps.iter().enumerate() {
        if cfg == CFG_EMPTY {
            break;
        }
        let pre = machine.state_id(&step.pre, i)?;
        let post = machine.state_id(&step.post, i + 1)?;
        let (next, abort) = machine.step_cfg(cfg, step.kind, pre, post)?;
        if abort && aborted_at.is_none() {
            aborted_at = Some(i);
        }
        cfg = next;
        final_state = post;
        if cfg == CFG_EMPTY && dead_at.is_none() {
            dead_at = Some(i);
        }
    }
    if cfg != CFG_EMPTY && machine.cfg_nullable(cfg, final_state)? {
        return Ok(Verdict::AcceptedTerminated);
    }
    if let Some(i) = aborted_at {
        return Ok(Verdict::AbortedAt(i));
    }
    Ok(match dead_at {
        Some(i) => Verdict::Rejected {
            at: i,
            reason: "no decomposition survives this step".into(),
        },
        None => Verdict::Rejected {
            at: trace.len(),
            reason: "no decomposition terminates at the end of the trace".into(),
        },
    })
}

fn accepts_lasso(
    machine: &mut Machine<'_>,
    root: machine::CmdId,
    trace: &Trace,
) -> Result<Verdict, SemError> {
    let verdict = {
        let mut ctx = InfCtx::new(machine, trace)?;
        ctx.verdict(root, 0)?
    };
    Ok(match verdict {
        InfVerdict::Acc => Verdict::AcceptedInfinite,
        InfVerdict::Abort(d) => Verdict::AbortedAt(d),
        InfVerdict::Rej => {
            // For the rejection index, run the residuals through the prefix
            // plus two cycles and report where they die (or the end).
            let unrolled = trace.unroll(2);
            let at = match accepts_finite(machine, root, &unrolled)? {
                Verdict::Rejected { at, .. } => at.min(trace.len()),
                _ => trace.len(),
            };
            Verdict::Rejected {
                at,
                reason: "no accepting infinite decomposition".into(),
            }
        }
    })
}

/// True iff the finite trace is a prefix of some accepted behaviour of the
/// command (an aborted prefix counts: anything may follow an abort).
pub fn partial_accepts(
    cmd: &Command,
    trace: &Trace,
    space: &StateSpace,
) -> Result<bool, SemError> {
    if !trace.well_formed() || trace.is_lasso() {
        return Err(SemError::IllFormedTrace);
    }
    let mut machine = Machine::new(space);
    let root = machine.compile(cmd)?;
    let s0 = machine.state_id(&trace.init, 0)?;
    let eps = machine.eps(root, s0)?;
    if eps.abort {
        return Ok(true);
    }
    let (mut cfg, abort0) = machine.start(root, s0)?;
    if abort0 {
        return Ok(true);
    }
    let mut cur = s0;
    for (i, step) in trace.steps.iter().enumerate() {
        if cfg == CFG_EMPTY {
            return Ok(false);
        }
        let pre = machine.state_id(&step.pre, i)?;
        let post = machine.state_id(&step.post, i + 1)?;
        let (next, abort) = machine.step_cfg(cfg, step.kind, pre, post)?;
        if abort {
            return Ok(true);
        }
        cfg = next;
        cur = post;
    }
    if cfg == CFG_EMPTY {
        return Ok(false);
    }
    // Reachability to a nullable configuration over any continuation.
    let n_states = machine.space.len() as StateId;
    let mut seen: HashMap<(StateId, CfgId), ()> = HashMap::new();
    let mut queue: VecDeque<(StateId, CfgId)> = VecDeque::new();
    seen.insert((cur, cfg), ());
    queue.push_back((cur, cfg));
    let budget = 1_000_000u64;
    let mut visited = 0u64;
    while let Some((s, c)) = queue.pop_front() {
        visited += 1;
        if visited > budget {
            return Err(SemError::Budget { visited });
        }
        if machine.cfg_nullable(c, s)? {
            return Ok(true);
        }
        for kind in [StepKind::Pgm, StepKind::Env] {
            for post in 0..n_states {
                let (next, abort) = machine.step_cfg(c, kind, s, post)?;
                if abort {
                    return Ok(true);
                }
                if next != CFG_EMPTY && seen.insert((post, next), ()).is_none() {
                    queue.push_back((post, next));
                }
            }
        }
    }
    Ok(false)
}

/// Describes which sub-command is responsible for a non-accepted verdict by
/// descending weak conjunctions and reporting the failing side's path.
pub fn explain(cmd: &Command, trace: &Trace, space: &StateSpace) -> Result<String, SemError> {
    fn walk(
        cmd: &Command,
        trace: &Trace,
        space: &StateSpace,
        path: &mut String,
    ) -> Result<(), SemError> {
        if let Command::Conj(a, b) = cmd {
            let va = accepts(a, trace, space)?;
            if !va.is_accepted_or_aborted() {
                path.push_str(".0");
                return walk(a, trace, space, path);
            }
            let vb = accepts(b, trace, space)?;
            if !vb.is_accepted_or_aborted() {
                path.push_str(".1");
                return walk(b, trace, space, path);
            }
        }
        Ok(())
    }
    let mut path = String::from("root");
    walk(cmd, trace, space, &mut path)?;
    Ok(path)
}

#[cfg(test)]
mod tests;
