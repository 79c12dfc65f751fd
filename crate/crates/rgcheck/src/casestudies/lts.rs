//! Instruction-granularity implementation models and the closed-system
//! interleaving explorer.
//!
//! Each instruction executes as one atomic program step of its thread (one
//! shared-memory access per instruction; a compare-and-swap counts as one).
//! The stack is modelled over the abstract sequence `s`; there is no heap,
//! so ABA and reclamation are out of scope. Busy-wait loops show up as
//! cycles in the exploration graph and are emitted as lasso runs.

use thiserror::Error;

use crate::kernel::{
    eval_pred, Binding, Decls, KernelError, SeqVal, State, StatePredicate, Value, VarDecl,
    VarName,
};

#[derive(Debug, Error)]
pub enum LtsError {
    #[error("kernel error: {0}")]
    Kernel(#[from] KernelError),
    #[error("configuration error: {0}")]
    Config(String),
}

/// Which specification operation an instance performs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpKind {
    Write,
    Read,
    Push,
    Pop,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Write => "write",
            OpKind::Read => "read",
            OpKind::Push => "push",
            OpKind::Pop => "pop",
        }
    }
}

/// One operation instance executed by a thread.
#[derive(Clone, Debug)]
pub struct OpInstance {
    pub thread: usize,
    pub kind: OpKind,
    pub arg: Option<Value>,
    /// Program counters `lo..=hi` belonging to this instance.
    pub pc_range: (usize, usize),
    /// Result slot in the system declarations (for read/pop).
    pub result_slot: Option<VarName>,
}

/// Simultaneous variable updates, all reading the pre-state.
#[derive(Clone, Debug)]
pub enum Update {
    SetScalar(Value),
    /// seq := seq of another variable
    CopySeq(VarName),
    /// seq := seq ++ [value]
    AppendLit(Value),
    /// seq := [value] ++ seq
    PrependLit(Value),
    /// seq := tail(seq), or [] when already empty
    TailOrEmpty,
    /// scalar := head(other), or the fallback value when empty
    HeadOr(VarName, Value),
}

/// Instruction guards; kept separate from the specification predicate
/// language because implementations compare two variables (CAS).
#[derive(Clone, Debug)]
pub enum Guard {
    Always,
    Pred(StatePredicate),
    VarsEqual(VarName, VarName),
    VarsDiffer(VarName, VarName),
    And(Box<Guard>, Box<Guard>),
}

impl Guard {
    fn and(a: Guard, b: Guard) -> Guard {
        Guard::And(Box::new(a), Box::new(b))
    }
}

/// One guarded atomic instruction.
#[derive(Clone, Debug)]
pub struct Instr {
    pub label: String,
    pub guard: Guard,
    pub updates: Vec<(VarName, Update)>,
    pub next: usize,
}

/// A thread: alternatives per program counter (guards at one counter are
/// mutually exclusive) plus the operation instances it performs.
#[derive(Clone, Debug, Default)]
pub struct ThreadProgram {
    pub instrs: Vec<Vec<Instr>>,
    pub ops: Vec<OpInstance>,
}

/// A closed system of threads over shared declarations.
#[derive(Clone, Debug)]
pub struct Lts {
    pub decls: Decls,
    pub init: State,
    pub threads: Vec<ThreadProgram>,
    pub data_var: VarName,
    /// Data-type invariant expected of every reachable state.
    pub invariant: Option<StatePredicate>,
}

const MAX_THREADS: usize = 3;
const MAX_OPS_PER_THREAD: usize = 2;

fn eval_guard(g: &Guard, decls: &Decls, state: &State) -> Result<bool, KernelError> {
    Ok(match g {
        Guard::Always => true,
        Guard::Pred(p) => eval_pred(p, decls, state)?,
        Guard::VarsEqual(a, b) => state.get(decls, a)? == state.get(decls, b)?,
        Guard::VarsDiffer(a, b) => state.get(decls, a)? != state.get(decls, b)?,
        Guard::And(a, b) => eval_guard(a, decls, state)? && eval_guard(b, decls, state)?,
    })
}

fn apply_updates(
    updates: &[(VarName, Update)],
    decls: &Decls,
    state: &State,
) -> Result<State, KernelError> {
    let mut next = state.clone();
    for (var, update) in updates {
        let idx = decls.index_of(var)?;
        let new = match update {
            Update::SetScalar(v) => Binding::Scalar(*v),
            Update::CopySeq(src) => state.get(decls, src)?.clone(),
            Update::AppendLit(v) => match state.get(decls, var)? {
                Binding::Seq(s) => Binding::Seq(s.append(*v)),
                _ => return Err(KernelError::KindMismatch(var.clone())),
            },
            Update::PrependLit(v) => match state.get(decls, var)? {
                Binding::Seq(s) => Binding::Seq(s.prepend(*v)),
                _ => return Err(KernelError::KindMismatch(var.clone())),
            },
            Update::TailOrEmpty => match state.get(decls, var)? {
                Binding::Seq(s) => Binding::Seq(s.tail().unwrap_or_else(SeqVal::empty)),
                _ => return Err(KernelError::KindMismatch(var.clone())),
            },
            Update::HeadOr(src, fallback) => match state.get(decls, src)? {
                Binding::Seq(s) => Binding::Scalar(s.head().unwrap_or(*fallback)),
                _ => return Err(KernelError::KindMismatch(src.clone())),
            },
        };
        next.bindings[idx] = new;
    }
    Ok(next)
}

/// One step of a run: which thread acted, from which program counter.
#[derive(Clone, Debug)]
pub struct SysStep {
    pub thread: usize,
    pub pre_pc: usize,
    pub post_pc: usize,
    pub label: String,
    pub pre: State,
    pub post: State,
}

/// One maximal interleaving (or a lasso closing a busy-wait cycle, or a
/// depth-capped prefix).
#[derive(Clone, Debug)]
pub struct Run {
    pub init: State,
    pub steps: Vec<SysStep>,
    pub loop_start: Option<usize>,
    pub capped: bool,
    pub final_state: State,
    pub final_pcs: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ExploreConfig {
    pub max_len: usize,
    pub max_runs: usize,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            max_len: 24,
            max_runs: 1_000_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("kernel error: {0}")]
    Kernel(#[from] KernelError),
    #[error("run budget exceeded ({0} runs)")]
    Budget(usize),
}

/// Exhaustively enumerates maximal interleavings, emitting lassos for
/// configurations that repeat along a path. Deterministic: threads are
/// scheduled in index order, instruction alternatives in listed order.
pub fn explore(lts: &Lts, cfg: &ExploreConfig) -> Result<Vec<Run>, ExploreError> {
    struct Ctx<'l> {
        lts: &'l Lts,
        cfg: &'l ExploreConfig,
        runs: Vec<Run>,
        steps: Vec<SysStep>,
        // (pcs, state) configurations along the current path
        path: Vec<(Vec<usize>, State)>,
    }

    fn emit(ctx: &mut Ctx<'_>, loop_start: Option<usize>, capped: bool) {
        let (pcs, state) = ctx.path.last().unwrap().clone();
        ctx.runs.push(Run {
            init: ctx.path[0].1.clone(),
            steps: ctx.steps.clone(),
            loop_start,
            capped,
            final_state: state,
            final_pcs: pcs,
        });
    }

    fn dfs(ctx: &mut Ctx<'_>) -> Result<(), ExploreError> {
        if ctx.runs.len() >= ctx.cfg.max_runs {
            return Err(ExploreError::Budget(ctx.runs.len()));
        }
        let (pcs, state) = ctx.path.last().unwrap().clone();
        // Cycle: this configuration appeared earlier on the path.
        if let Some(at) = ctx.path[..ctx.path.len() - 1]
            .iter()
            .position(|(p, s)| *p == pcs && *s == state)
        {
            emit(ctx, Some(at), false);
            return Ok(());
        }
        if ctx.steps.len() >= ctx.cfg.max_len {
            emit(ctx, None, true);
            return Ok(());
        }
        let mut any = false;
        for (t, prog) in ctx.lts.threads.iter().enumerate() {
            let pc = pcs[t];
            if pc >= prog.instrs.len() {
                continue;
            }
            for instr in &prog.instrs[pc] {
                if !eval_guard(&instr.guard, &ctx.lts.decls, &state)? {
                    continue;
                }
                any = true;
                let post = apply_updates(&instr.updates, &ctx.lts.decls, &state)?;
                let mut next_pcs = pcs.clone();
                next_pcs[t] = instr.next;
                ctx.steps.push(SysStep {
                    thread: t,
                    pre_pc: pc,
                    post_pc: instr.next,
                    label: instr.label.clone(),
                    pre: state.clone(),
                    post: post.clone(),
                });
                ctx.path.push((next_pcs, post));
                dfs(ctx)?;
                ctx.path.pop();
                ctx.steps.pop();
            }
        }
        if !any {
            emit(ctx, None, false);
        }
        Ok(())
    }

    let pcs = vec![0usize; lts.threads.len()];
    let mut ctx = Ctx {
        lts,
        cfg,
        runs: Vec::new(),
        steps: Vec::new(),
        path: vec![(pcs, lts.init.clone())],
    };
    dfs(&mut ctx)?;
    Ok(ctx.runs)
}

/// Checks the data-type invariant over every state of every run; returns the
/// first violating run prefix.
pub fn check_invariant(lts: &Lts, runs: &[Run]) -> Result<Option<(usize, usize)>, KernelError> {
    let Some(inv) = &lts.invariant else {
        return Ok(None);
    };
    for (ri, run) in runs.iter().enumerate() {
        if !eval_pred(inv, &lts.decls, &run.init)? {
            return Ok(Some((ri, 0)));
        }
        for (si, step) in run.steps.iter().enumerate() {
            if !eval_pred(inv, &lts.decls, &step.post)? {
                return Ok(Some((ri, si + 1)));
            }
        }
    }
    Ok(None)
}

fn scale_check(threads: &[Vec<(OpKind, Option<Value>)>]) -> Result<(), LtsError> {
    if threads.len() > MAX_THREADS {
        return Err(LtsError::Config(format!(
            "at most {MAX_THREADS} threads at desk scale"
        )));
    }
    if threads.iter().any(|ops| ops.len() > MAX_OPS_PER_THREAD) {
        return Err(LtsError::Config(format!(
            "at most {MAX_OPS_PER_THREAD} operations per thread at desk scale"
        )));
    }
    Ok(())
}

fn vn(s: String) -> VarName {
    VarName(s)
}

/// Treiber stack model: each push loops {read top snapshot; CAS: commit if
/// unchanged else retry}; pop likewise with an empty check returning null.
pub fn treiber_impl(
    threads: &[Vec<(OpKind, Option<Value>)>],
    values: &[Value],
    cap: usize,
) -> Result<Lts, LtsError> {
    build_treiber(threads, values, cap, true)
}

/// Mutation control: pop commits without checking the snapshot for
/// emptiness, returning a garbage head value from the empty stack.
pub fn treiber_impl_no_empty_check(
    threads: &[Vec<(OpKind, Option<Value>)>],
    values: &[Value],
    cap: usize,
) -> Result<Lts, LtsError> {
    build_treiber(threads, values, cap, false)
}

fn build_treiber(
    threads: &[Vec<(OpKind, Option<Value>)>],
    values: &[Value],
    cap: usize,
    empty_check: bool,
) -> Result<Lts, LtsError> {
    scale_check(threads)?;
    let garbage = *values.first().ok_or_else(|| {
        LtsError::Config("value universe must be non-empty".into())
    })?;
    let mut vars = vec![VarDecl::seq("s", values.to_vec(), cap)];
    let mut progs = Vec::new();
    for (t, ops) in threads.iter().enumerate() {
        let mut prog = ThreadProgram::default();
        for (oi, (kind, arg)) in ops.iter().enumerate() {
            let snap = vn(format!("snap{t}_{oi}"));
            vars.push(VarDecl::seq(snap.0.clone(), values.to_vec(), cap));
            let base = prog.instrs.len();
            match kind {
                OpKind::Push => {
                    let v = arg.ok_or_else(|| LtsError::Config("push needs a value".into()))?;
                    // base+0: snapshot; base+1: CAS
                    prog.instrs.push(vec![Instr {
                        label: format!("t{t}:push:read-top"),
                        guard: Guard::Always,
                        updates: vec![(snap.clone(), Update::CopySeq(vn("s".into())))],
                        next: base + 1,
                    }]);
                    prog.instrs.push(vec![
                        Instr {
                            label: format!("t{t}:push:cas-commit"),
                            guard: Guard::VarsEqual(vn("s".into()), snap.clone()),
                            updates: vec![(vn("s".into()), Update::PrependLit(v))],
                            next: base + 2,
                        },
                        Instr {
                            label: format!("t{t}:push:cas-fail"),
                            guard: Guard::VarsDiffer(vn("s".into()), snap.clone()),
                            updates: vec![],
                            next: base,
                        },
                    ]);
                    prog.ops.push(OpInstance {
                        thread: t,
                        kind: OpKind::Push,
                        arg: Some(v),
                        pc_range: (base, base + 1),
                        result_slot: None,
                    });
                }
                OpKind::Pop => {
                    let slot = vn(format!("res{t}_{oi}"));
                    let mut dom = vec![Value::Null];
                    dom.extend_from_slice(values);
                    vars.push(VarDecl::scalar(slot.0.clone(), dom));
                    prog.instrs.push(vec![Instr {
                        label: format!("t{t}:pop:read-top"),
                        guard: Guard::Always,
                        updates: vec![(snap.clone(), Update::CopySeq(vn("s".into())))],
                        next: base + 1,
                    }]);
                    let mut alts = Vec::new();
                    if empty_check {
                        alts.push(Instr {
                            label: format!("t{t}:pop:empty"),
                            guard: Guard::Pred(StatePredicate::not(StatePredicate::NonEmpty(
                                snap.clone(),
                            ))),
                            updates: vec![(slot.clone(), Update::SetScalar(Value::Null))],
                            next: base + 2,
                        });
                        alts.push(Instr {
                            label: format!("t{t}:pop:cas-commit"),
                            guard: Guard::and(
                                Guard::Pred(StatePredicate::NonEmpty(snap.clone())),
                                Guard::VarsEqual(vn("s".into()), snap.clone()),
                            ),
                            updates: vec![
                                (slot.clone(), Update::HeadOr(vn("s".into()), garbage)),
                                (vn("s".into()), Update::TailOrEmpty),
                            ],
                            next: base + 2,
                        });
                        alts.push(Instr {
                            label: format!("t{t}:pop:cas-fail"),
                            guard: Guard::and(
                                Guard::Pred(StatePredicate::NonEmpty(snap.clone())),
                                Guard::VarsDiffer(vn("s".into()), snap.clone()),
                            ),
                            updates: vec![],
                            next: base,
                        });
                    } else {
                        // Bug under test: commits blindly, reading a garbage
                        // head from the empty stack.
                        alts.push(Instr {
                            label: format!("t{t}:pop:cas-commit"),
                            guard: Guard::VarsEqual(vn("s".into()), snap.clone()),
                            updates: vec![
                                (slot.clone(), Update::HeadOr(vn("s".into()), garbage)),
                                (vn("s".into()), Update::TailOrEmpty),
                            ],
                            next: base + 2,
                        });
                        alts.push(Instr {
                            label: format!("t{t}:pop:cas-fail"),
                            guard: Guard::VarsDiffer(vn("s".into()), snap.clone()),
                            updates: vec![],
                            next: base,
                        });
                    }
                    prog.instrs.push(alts);
                    prog.ops.push(OpInstance {
                        thread: t,
                        kind: OpKind::Pop,
                        arg: None,
                        pc_range: (base, base + 1),
                        result_slot: Some(slot),
                    });
                }
                other => {
                    return Err(LtsError::Config(format!(
                        "treiber model only has push/pop, got {}",
                        other.name()
                    )))
                }
            }
        }
        progs.push(prog);
    }
    let decls = Decls::new(vars);
    let init = initial_state(&decls);
    Ok(Lts {
        decls,
        init,
        threads: progs,
        data_var: vn("s".into()),
        invariant: None,
    })
}

/// Lock-based bounded queue: write = acquire; test capacity; append;
/// release, busy-wait retrying while full. Read mirrors it on emptiness.
pub fn lock_queue_impl(
    n: usize,
    threads: &[Vec<(OpKind, Option<Value>)>],
    values: &[Value],
    cap: usize,
) -> Result<Lts, LtsError> {
    build_lock_queue(n, threads, values, cap, true)
}

/// Mutation control: write appends without testing the capacity.
pub fn lock_queue_impl_no_capacity_check(
    n: usize,
    threads: &[Vec<(OpKind, Option<Value>)>],
    values: &[Value],
    cap: usize,
) -> Result<Lts, LtsError> {
    build_lock_queue(n, threads, values, cap, false)
}

fn build_lock_queue(
    n: usize,
    threads: &[Vec<(OpKind, Option<Value>)>],
    values: &[Value],
    cap: usize,
    capacity_check: bool,
) -> Result<Lts, LtsError> {
    scale_check(threads)?;
    if n < 1 {
        return Err(LtsError::Config("queue capacity must be at least 1".into()));
    }
    let garbage = *values
        .first()
        .ok_or_else(|| LtsError::Config("value universe must be non-empty".into()))?;
    let lock = vn("lock".into());
    let mut vars = vec![
        VarDecl::seq("qu", values.to_vec(), cap),
        VarDecl::scalar(lock.0.clone(), vec![Value::Int(0), Value::Int(1)]),
    ];
    let mut progs = Vec::new();
    for (t, ops) in threads.iter().enumerate() {
        let mut prog = ThreadProgram::default();
        for (oi, (kind, arg)) in ops.iter().enumerate() {
            let base = prog.instrs.len();
            match kind {
                OpKind::Write => {
                    let v = arg.ok_or_else(|| LtsError::Config("write needs a value".into()))?;
                    if capacity_check {
                        // base: acquire; +1 test; +2 append; +3 release-retry;
                        // +4 release-done
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:acquire"),
                            guard: Guard::Pred(StatePredicate::Eq(
                                lock.clone(),
                                Binding::Scalar(Value::Int(0)),
                            )),
                            updates: vec![(lock.clone(), Update::SetScalar(Value::Int(1)))],
                            next: base + 1,
                        }]);
                        prog.instrs.push(vec![
                            Instr {
                                label: format!("t{t}:write:test-room"),
                                guard: Guard::Pred(StatePredicate::len_lt("qu", n)),
                                updates: vec![],
                                next: base + 2,
                            },
                            Instr {
                                label: format!("t{t}:write:test-full"),
                                guard: Guard::Pred(StatePredicate::not(StatePredicate::len_lt(
                                    "qu", n,
                                ))),
                                updates: vec![],
                                next: base + 3,
                            },
                        ]);
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:append"),
                            guard: Guard::Always,
                            updates: vec![(vn("qu".into()), Update::AppendLit(v))],
                            next: base + 4,
                        }]);
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:release-retry"),
                            guard: Guard::Always,
                            updates: vec![(lock.clone(), Update::SetScalar(Value::Int(0)))],
                            next: base,
                        }]);
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:release"),
                            guard: Guard::Always,
                            updates: vec![(lock.clone(), Update::SetScalar(Value::Int(0)))],
                            next: base + 5,
                        }]);
                        prog.ops.push(OpInstance {
                            thread: t,
                            kind: OpKind::Write,
                            arg: Some(v),
                            pc_range: (base, base + 4),
                            result_slot: None,
                        });
                    } else {
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:acquire"),
                            guard: Guard::Pred(StatePredicate::Eq(
                                lock.clone(),
                                Binding::Scalar(Value::Int(0)),
                            )),
                            updates: vec![(lock.clone(), Update::SetScalar(Value::Int(1)))],
                            next: base + 1,
                        }]);
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:append-unchecked"),
                            guard: Guard::Always,
                            updates: vec![(vn("qu".into()), Update::AppendLit(v))],
                            next: base + 2,
                        }]);
                        prog.instrs.push(vec![Instr {
                            label: format!("t{t}:write:release"),
                            guard: Guard::Always,
                            updates: vec![(lock.clone(), Update::SetScalar(Value::Int(0)))],
                            next: base + 3,
                        }]);
                        prog.ops.push(OpInstance {
                            thread: t,
                            kind: OpKind::Write,
                            arg: Some(v),
                            pc_range: (base, base + 2),
                            result_slot: None,
                        });
                    }
                }
                OpKind::Read => {
                    let slot = vn(format!("res{t}_{oi}"));
                    let mut dom = vec![Value::Null];
                    dom.extend_from_slice(values);
                    vars.push(VarDecl::scalar(slot.0.clone(), dom));
                    prog.instrs.push(vec![Instr {
                        label: format!("t{t}:read:acquire"),
                        guard: Guard::Pred(StatePredicate::Eq(
                            lock.clone(),
                            Binding::Scalar(Value::Int(0)),
                        )),
                        updates: vec![(lock.clone(), Update::SetScalar(Value::Int(1)))],
                        next: base + 1,
                    }]);
                    prog.instrs.push(vec![
                        Instr {
                            label: format!("t{t}:read:test-nonempty"),
                            guard: Guard::Pred(StatePredicate::non_empty("qu")),
                            updates: vec![],
                            next: base + 2,
                        },
                        Instr {
                            label: format!("t{t}:read:test-empty"),
                            guard: Guard::Pred(StatePredicate::not(StatePredicate::non_empty(
                                "qu",
                            ))),
                            updates: vec![],
                            next: base + 3,
                        },
                    ]);
                    prog.instrs.push(vec![Instr {
                        label: format!("t{t}:read:take"),
                        guard: Guard::Always,
                        updates: vec![
                            (slot.clone(), Update::HeadOr(vn("qu".into()), garbage)),
                            (vn("qu".into()), Update::TailOrEmpty),
                        ],
                        next: base + 4,
                    }]);
                    prog.instrs.push(vec![Instr {
                        label: format!("t{t}:read:release-retry"),
                        guard: Guard::Always,
                        updates: vec![(lock.clone(), Update::SetScalar(Value::Int(0)))],
                        next: base,
                    }]);
                    prog.instrs.push(vec![Instr {
                        label: format!("t{t}:read:release"),
                        guard: Guard::Always,
                        updates: vec![(lock.clone(), Update::SetScalar(Value::Int(0)))],
                        next: base + 5,
                    }]);
                    prog.ops.push(OpInstance {
                        thread: t,
                        kind: OpKind::Read,
                        arg: None,
                        pc_range: (base, base + 4),
                        result_slot: Some(slot),
                    });
                }
                other => {
                    return Err(LtsError::Config(format!(
                        "lock queue model only has write/read, got {}",
                        other.name()
                    )))
                }
            }
        }
        progs.push(prog);
    }
    let decls = Decls::new(vars);
    let init = initial_state(&decls);
    Ok(Lts {
        decls,
        init,
        threads: progs,
        data_var: vn("qu".into()),
        invariant: Some(StatePredicate::len_lt("qu", n + 1)),
    })
}

fn initial_state(decls: &Decls) -> State {
    let bindings = decls
        .vars()
        .iter()
        .map(|d| match &d.kind {
            crate::kernel::VarKind::Scalar { domain } => {
                // locks start 0, result slots start null, other scalars take
                // their first domain value
                if domain.contains(&Value::Null) {
                    Binding::Scalar(Value::Null)
                } else if domain.contains(&Value::Int(0)) {
                    Binding::Scalar(Value::Int(0))
                } else {
                    Binding::Scalar(domain[0])
                }
            }
            crate::kernel::VarKind::Seq { .. } => Binding::Seq(SeqVal::empty()),
        })
        .collect();
    State { bindings }
}

/// Deduplicated final data-variable values across runs; the final-state
/// oracle of the acceptance suite compares this against an independent
/// interleaver.
pub fn final_data_values(lts: &Lts, runs: &[Run]) -> Result<Vec<Binding>, KernelError> {
    let mut out: Vec<Binding> = Vec::new();
    for run in runs {
        if run.loop_start.is_some() || run.capped {
            continue;
        }
        let b = run.final_state.get(&lts.decls, &lts.data_var)?.clone();
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out.sort();
    Ok(out)
}
