//! Steps, finite traces, lasso traces, and bounded enumerators.

use std::fmt::Write as _;

use thiserror::Error;

use crate::kernel::{Binding, Decls, SeqVal, State, StateRelation, StateSpace, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("enumeration budget exceeded after {emitted} traces")]
    ResourceLimit { emitted: u64 },
    #[error("malformed trace text at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("kernel error: {0}")]
    Kernel(#[from] crate::kernel::KernelError),
}

/// Whether a step was taken by the program (this thread) or its environment.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum StepKind {
    Pgm,
    Env,
}

impl StepKind {
    pub fn label(self) -> &'static str {
        match self {
            StepKind::Pgm => "pgm",
            StepKind::Env => "env",
        }
    }
}

/// One labeled atomic step.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Step {
    pub kind: StepKind,
    pub pre: State,
    pub post: State,
}

impl Step {
    /// A program step that changes nothing.
    pub fn is_stutter(&self) -> bool {
        self.kind == StepKind::Pgm && self.pre == self.post
    }
}

/// Finite, or lasso: the trace denotes prefix ++ cycle^omega, the cycle
/// being `steps[loop_start..]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TraceShape {
    Finite,
    Lasso { loop_start: usize },
}

/// A trace knows its initial state even when it has no steps, so that
/// preconditions and `initially` clauses can be evaluated on it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Trace {
    pub init: State,
    pub steps: Vec<Step>,
    pub shape: TraceShape,
}

impl Trace {
    pub fn finite(init: State, steps: Vec<Step>) -> Self {
        Trace {
            init,
            steps,
            shape: TraceShape::Finite,
        }
    }

    pub fn lasso(init: State, steps: Vec<Step>, loop_start: usize) -> Self {
        Trace {
            init,
            steps,
            shape: TraceShape::Lasso { loop_start },
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_lasso(&self) -> bool {
        matches!(self.shape, TraceShape::Lasso { .. })
    }

    /// The state entering position `i` (state `i` of `0..=len`).
    pub fn state_at(&self, i: usize) -> &State {
        if i == 0 {
            &self.init
        } else {
            &self.steps[i - 1].post
        }
    }

    /// A finite prefix of the first `n` steps.
    pub fn prefix(&self, n: usize) -> Trace {
        Trace::finite(self.init.clone(), self.steps[..n].to_vec())
    }

    /// Contiguity plus, for lassos, cycle state-consistency.
    pub fn well_formed(&self) -> bool {
        if let Some(first) = self.steps.first() {
            if first.pre != self.init {
                return false;
            }
        }
        for w in self.steps.windows(2) {
            if w[0].post != w[1].pre {
                return false;
            }
        }
        match self.shape {
            TraceShape::Finite => true,
            TraceShape::Lasso { loop_start } => {
                loop_start < self.steps.len()
                    && self.steps.last().unwrap().post == self.steps[loop_start].pre
            }
        }
    }

    /// The finite trace obtained by unrolling a lasso's cycle `n` times
    /// (prefix plus n copies of the cycle). Identity on finite traces.
    pub fn unroll(&self, n: usize) -> Trace {
        match self.shape {
            TraceShape::Finite => self.clone(),
            TraceShape::Lasso { loop_start } => {
                let mut steps = self.steps[..loop_start].to_vec();
                for _ in 0..n {
                    steps.extend(self.steps[loop_start..].iter().cloned());
                }
                Trace::finite(self.init.clone(), steps)
            }
        }
    }
}

/// Serializes in the counterexample report format: an `init` line, one step
/// per line, and a `loop@<index>` marker for lassos.
pub fn format_trace(trace: &Trace, decls: &Decls) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "init {}", trace.init.render(decls));
    for step in &trace.steps {
        let _ = writeln!(
            out,
            "{} {} -> {}",
            step.kind.label(),
            step.pre.render(decls),
            step.post.render(decls)
        );
    }
    if let TraceShape::Lasso { loop_start } = trace.shape {
        let _ = writeln!(out, "loop@{loop_start}");
    }
    out
}

fn parse_value(text: &str, line: usize) -> Result<Value, TraceError> {
    if text == "null" {
        Ok(Value::Null)
    } else {
        text.parse::<i64>().map(Value::Int).map_err(|_| TraceError::Parse {
            line,
            msg: format!("bad value `{text}`"),
        })
    }
}

fn parse_binding(text: &str, line: usize) -> Result<Binding, TraceError> {
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let mut items = Vec::new();
        if !inner.is_empty() {
            for part in inner.split(',') {
                items.push(parse_value(part.trim(), line)?);
            }
        }
        Ok(Binding::Seq(SeqVal(items)))
    } else {
        Ok(Binding::Scalar(parse_value(text, line)?))
    }
}

fn parse_state(text: &str, decls: &Decls, line: usize) -> Result<State, TraceError> {
    let mut bindings: Vec<Option<Binding>> = vec![None; decls.len()];
    for pair in text.split(',') {
        // Sequence values contain commas; re-join pieces until brackets
        // balance by scanning manually instead.
        let _ = pair;
        break;
    }
    // Split on commas not inside brackets.
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut pieces = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&text[start..]);
    for piece in pieces {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (name, val) = piece.split_once('=').ok_or_else(|| TraceError::Parse {
            line,
            msg: format!("expected var=value in `{piece}`"),
        })?;
        let idx = decls
            .index_of(&crate::kernel::VarName::new(name.trim()))
            .map_err(TraceError::Kernel)?;
        bindings[idx] = Some(parse_binding(val.trim(), line)?);
    }
    let bindings = bindings
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| TraceError::Parse {
                line,
                msg: format!("variable `{}` missing from state", decls.vars()[i].name),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(State { bindings })
}

/// Parses the [`format_trace`] format.
pub fn parse_trace(text: &str, decls: &Decls) -> Result<Trace, TraceError> {
    let mut init = None;
    let mut steps = Vec::new();
    let mut shape = TraceShape::Finite;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let n = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("init ") {
            init = Some(parse_state(rest.trim(), decls, n)?);
        } else if let Some(rest) = line.strip_prefix("loop@") {
            let loop_start = rest.parse::<usize>().map_err(|_| TraceError::Parse {
                line: n,
                msg: "bad loop index".into(),
            })?;
            shape = TraceShape::Lasso { loop_start };
        } else {
            let (kind, rest) = if let Some(r) = line.strip_prefix("pgm ") {
                (StepKind::Pgm, r)
            } else if let Some(r) = line.strip_prefix("env ") {
                (StepKind::Env, r)
            } else {
                return Err(TraceError::Parse {
                    line: n,
                    msg: format!("expected step line, got `{line}`"),
                });
            };
            let (pre, post) = rest.split_once("->").ok_or_else(|| TraceError::Parse {
                line: n,
                msg: "expected `pre -> post`".into(),
            })?;
            steps.push(Step {
                kind,
                pre: parse_state(pre.trim(), decls, n)?,
                post: parse_state(post.trim(), decls, n)?,
            });
        }
    }
    let init = init.or_else(|| steps.first().map(|s| s.pre.clone())).ok_or(
        TraceError::Parse {
            line: 0,
            msg: "trace has no init line and no steps".into(),
        },
    )?;
    Ok(Trace { init, steps, shape })
}

/// Optional per-kind step filters for the enumerators.
#[derive(Clone, Default, Debug)]
pub struct StepFilters {
    pub pgm: Option<StateRelation>,
    pub env: Option<StateRelation>,
}

impl StepFilters {
    pub fn none() -> Self {
        StepFilters::default()
    }

    pub fn env_only(rel: StateRelation) -> Self {
        StepFilters {
            pgm: None,
            env: Some(rel),
        }
    }
}

fn allowed_kinds(kinds: &[StepKind]) -> (bool, bool) {
    (
        kinds.contains(&StepKind::Pgm),
        kinds.contains(&StepKind::Env),
    )
}

/// Precomputed successor table: for each state, the filtered (kind, post)
/// successors in canonical order (pgm before env, post states in id order).
fn successor_table(
    space: &StateSpace,
    kinds: &[StepKind],
    filters: &StepFilters,
) -> Result<Vec<Vec<(StepKind, u32)>>, TraceError> {
    let (want_pgm, want_env) = allowed_kinds(kinds);
    let decls = space.decls();
    let n = space.len();
    let mut table = Vec::with_capacity(n);
    for pre in 0..n {
        let mut succs = Vec::new();
        if want_pgm {
            for post in 0..n {
                let ok = match &filters.pgm {
                    None => true,
                    Some(r) => crate::kernel::eval_rel(
                        r,
                        decls,
                        space.state(pre as u32),
                        space.state(post as u32),
                    )?,
                };
                if ok {
                    succs.push((StepKind::Pgm, post as u32));
                }
            }
        }
        if want_env {
            for post in 0..n {
                let ok = match &filters.env {
                    None => true,
                    Some(r) => crate::kernel::eval_rel(
                        r,
                        decls,
                        space.state(pre as u32),
                        space.state(post as u32),
                    )?,
                };
                if ok {
                    succs.push((StepKind::Env, post as u32));
                }
            }
        }
        table.push(succs);
    }
    Ok(table)
}

fn make_step(space: &StateSpace, kind: StepKind, pre: u32, post: u32) -> Step {
    Step {
        kind,
        pre: space.state(pre).clone(),
        post: space.state(post).clone(),
    }
}

/// Deterministic stream of every well-formed finite trace of length at most
/// `max_len` whose steps match the filters, each exactly once. Stops with
/// [`TraceError::ResourceLimit`] if more than `budget` traces would be
/// emitted.
pub struct TraceEnum<'a> {
    space: &'a StateSpace,
    table: Vec<Vec<(StepKind, u32)>>,
    max_len: usize,
    budget: u64,
    emitted: u64,
    // DFS stack: (state, next successor index to try).
    stack: Vec<(u32, usize)>,
    path: Vec<(StepKind, u32, u32)>,
    next_start: u32,
    pending_yield: bool,
    done: bool,
}

impl<'a> TraceEnum<'a> {
    fn current_trace(&self) -> Trace {
        let init = self.space.state(self.stack[0].0).clone();
        let steps = self
            .path
            .iter()
            .map(|&(k, pre, post)| make_step(self.space, k, pre, post))
            .collect();
        Trace::finite(init, steps)
    }
}

impl<'a> Iterator for TraceEnum<'a> {
    type Item = Result<Trace, TraceError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            if self.stack.is_empty() {
                if (self.next_start as usize) >= self.space.len() {
                    self.done = true;
                    return None;
                }
                self.stack.push((self.next_start, 0));
                self.next_start += 1;
                self.pending_yield = true;
            }
            if self.pending_yield {
                self.pending_yield = false;
                if self.emitted >= self.budget {
                    self.done = true;
                    return Some(Err(TraceError::ResourceLimit {
                        emitted: self.emitted,
                    }));
                }
                self.emitted += 1;
                return Some(Ok(self.current_trace()));
            }
            // Extend or backtrack.
            let depth = self.path.len();
            let (state, idx) = *self.stack.last().unwrap();
            let succs = &self.table[state as usize];
            if depth < self.max_len && idx < succs.len() {
                self.stack.last_mut().unwrap().1 += 1;
                let (kind, post) = succs[idx];
                self.path.push((kind, state, post));
                self.stack.push((post, 0));
                self.pending_yield = true;
            } else {
                self.stack.pop();
                self.path.pop();
            }
        }
    }
}

pub fn enumerate_traces<'a>(
    space: &'a StateSpace,
    max_len: usize,
    kinds: &[StepKind],
    filters: &StepFilters,
    budget: u64,
) -> Result<TraceEnum<'a>, TraceError> {
    Ok(TraceEnum {
        space,
        table: successor_table(space, kinds, filters)?,
        max_len,
        budget,
        emitted: 0,
        stack: Vec::new(),
        path: Vec::new(),
        next_start: 0,
        pending_yield: false,
        done: false,
    })
}

/// Deterministic stream of well-formed lassos with total length at most
/// `max_len`. At each extension point, closures (ascending loop start) come
/// before further extensions.
pub struct LassoEnum<'a> {
    space: &'a StateSpace,
    table: Vec<Vec<(StepKind, u32)>>,
    max_len: usize,
    budget: u64,
    emitted: u64,
    stack: Vec<(u32, usize)>,
    path: Vec<(StepKind, u32, u32)>,
    pending_loops: Vec<usize>,
    next_start: u32,
    done: bool,
}

impl<'a> Iterator for LassoEnum<'a> {
    type Item = Result<Trace, TraceError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            if let Some(loop_start) = self.pending_loops.pop() {
                if self.emitted >= self.budget {
                    self.done = true;
                    return Some(Err(TraceError::ResourceLimit {
                        emitted: self.emitted,
                    }));
                }
                self.emitted += 1;
                let init = self.space.state(self.stack[0].0).clone();
                let steps = self
                    .path
                    .iter()
                    .map(|&(k, pre, post)| make_step(self.space, k, pre, post))
                    .collect();
                return Some(Ok(Trace::lasso(init, steps, loop_start)));
            }
            if self.stack.is_empty() {
                if (self.next_start as usize) >= self.space.len() {
                    self.done = true;
                    return None;
                }
                self.stack.push((self.next_start, 0));
                self.next_start += 1;
                continue;
            }
            let depth = self.path.len();
            let (state, idx) = *self.stack.last().unwrap();
            let succs = &self.table[state as usize];
            if depth < self.max_len && idx < succs.len() {
                self.stack.last_mut().unwrap().1 += 1;
                let (kind, post) = succs[idx];
                self.path.push((kind, state, post));
                self.stack.push((post, 0));
                // Closures available from the new endpoint: loop starts j
                // where the state entering position j equals the endpoint.
                let mut loops = Vec::new();
                for j in 0..self.path.len() {
                    if self.stack[j].0 == post {
                        loops.push(j);
                    }
                }
                loops.reverse(); // popped in ascending order
                self.pending_loops = loops;
            } else {
                self.stack.pop();
                self.path.pop();
            }
        }
    }
}

pub fn enumerate_lassos<'a>(
    space: &'a StateSpace,
    max_len: usize,
    kinds: &[StepKind],
    filters: &StepFilters,
    budget: u64,
) -> Result<LassoEnum<'a>, TraceError> {
    Ok(LassoEnum {
        space,
        table: successor_table(space, kinds, filters)?,
        max_len,
        budget,
        emitted: 0,
        stack: Vec::new(),
        path: Vec::new(),
        pending_loops: Vec::new(),
        next_start: 0,
        done: false,
    })
}
