//! Bounded refinement and equivalence checking between commands.
//!
//! `refines(abs, conc)` passes iff for every trace up to the bound (finite,
//! plus lassos when enabled): whenever the concrete command accepts the
//! trace, the abstract command accepts it or aborts at or before its end.
//! The finite part runs as a depth-first product search over
//! (state, abstract residuals, concrete residuals) configurations with
//! memoization; subtrees already verified under an identical configuration
//! key cannot contain the canonically first counterexample and are skipped.
//! Branches where the concrete side has no live residual carry no
//! obligations and are pruned, as are branches where the abstract side has
//! already aborted (abort covers every extension).

use std::collections::HashSet;

use crate::kernel::{
    eval_pred, eval_rel, Command, Decls, KernelError, StateId, StatePredicate, StateRelation,
    StateSpace, VarName,
};
use crate::semantics::inf::{InfCtx, InfVerdict};
use crate::semantics::machine::{CfgId, CmdId, Machine, SemError, CFG_EMPTY};
use crate::semantics::{accepts_in, Verdict};
use crate::traces::{Step, StepKind, Trace};

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("kernel error: {0}")]
    Kernel(#[from] KernelError),
    #[error("semantics error: {0}")]
    Sem(#[from] SemError),
    #[error("precondition violation: {0}")]
    Precondition(String),
}

/// How enumerated environment steps are constrained.
#[derive(Clone, Debug, Default)]
pub enum Environment {
    /// Any environment step (constrained only by relies inside commands).
    #[default]
    Open,
    /// Only environment steps satisfying the relation are enumerated.
    RelyConstrained(StateRelation),
}

/// Configuration of one bounded check.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub decls: Decls,
    pub max_len: usize,
    pub include_lassos: bool,
    pub environment: Environment,
    /// Upper bound on visited search configurations.
    pub node_budget: u64,
}

impl CheckConfig {
    pub fn new(decls: Decls, max_len: usize) -> Self {
        CheckConfig {
            decls,
            max_len,
            include_lassos: false,
            environment: Environment::Open,
            node_budget: 50_000_000,
        }
    }

    pub fn with_lassos(mut self) -> Self {
        self.include_lassos = true;
        self
    }

    pub fn env_rely(mut self, r: StateRelation) -> Self {
        self.environment = Environment::RelyConstrained(r);
        self
    }
}

/// Outcome of a bounded check.
#[derive(Clone, Debug)]
pub enum CheckStatus {
    Pass,
    Counterexample {
        trace: Trace,
        abstract_verdict: Verdict,
        concrete_verdict: Verdict,
    },
    BudgetExceeded {
        visited: u64,
    },
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub status: CheckStatus,
    /// Trace prefixes (finite part) and lassos examined.
    pub traces_checked: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(self.status, CheckStatus::Pass)
    }
}

/// Abstract-side tracking: once aborted, every extension is covered.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum AbsSide {
    Covered,
    Live(CfgId),
}

struct Search<'a> {
    machine: Machine<'a>,
    abs_root: CmdId,
    conc_root: CmdId,
    max_len: usize,
    env_succ: Vec<Vec<StateId>>,
    budget: u64,
    visited: u64,
    traces_checked: u64,
    memo: HashSet<(u8, StateId, u32, CfgId)>,
    path: Vec<(StepKind, StateId, StateId)>,
}

enum Found {
    Clean,
    Counterexample(Trace),
    Budget,
}

impl<'a> Search<'a> {
    fn new(
        space: &'a StateSpace,
        abs: &Command,
        conc: &Command,
        cfg: &CheckConfig,
    ) -> Result<Self, CheckError> {
        let mut machine = Machine::new(space);
        let abs_root = machine.compile(abs)?;
        let conc_root = machine.compile(conc)?;
        let n = space.len();
        let mut env_succ = Vec::with_capacity(n);
        for pre in 0..n {
            let mut succ = Vec::new();
            for post in 0..n {
                let ok = match &cfg.environment {
                    Environment::Open => true,
                    Environment::RelyConstrained(r) => eval_rel(
                        r,
                        space.decls(),
                        space.state(pre as StateId),
                        space.state(post as StateId),
                    )?,
                };
                if ok {
                    succ.push(post as StateId);
                }
            }
            env_succ.push(succ);
        }
        Ok(Search {
            machine,
            abs_root,
            conc_root,
            max_len: cfg.max_len,
            env_succ,
            budget: cfg.node_budget,
            visited: 0,
            traces_checked: 0,
            memo: HashSet::new(),
            path: Vec::new(),
        })
    }

    fn abs_key(abs: AbsSide) -> u32 {
        match abs {
            AbsSide::Covered => u32::MAX,
            AbsSide::Live(c) => c,
        }
    }

    fn trace_from_path(&self, start: StateId) -> Trace {
        let space = self.machine.space;
        let steps: Vec<Step> = self
            .path
            .iter()
            .map(|&(k, pre, post)| Step {
                kind: k,
                pre: space.state(pre).clone(),
                post: space.state(post).clone(),
            })
            .collect();
        Trace::finite(space.state(start).clone(), steps)
    }

    /// Depth-first check of all finite traces from (s, abs, conc); returns
    /// the canonically first counterexample if one exists.
    fn dfs_finite(
        &mut self,
        start: StateId,
        s: StateId,
        abs: AbsSide,
        conc: CfgId,
        depth: usize,
    ) -> Result<Found, CheckError> {
        self.visited += 1;
        self.traces_checked += 1;
        if self.visited > self.budget {
            return Ok(Found::Budget);
        }
        // Obligation at this endpoint: concrete accepted here?
        let conc_acc = if depth == 0 {
            self.machine.eps(self.conc_root, s)?.acc
        } else {
            self.machine.cfg_nullable(conc, s)?
        };
        if conc_acc {
            let abs_ok = match abs {
                AbsSide::Covered => true,
                AbsSide::Live(acfg) => {
                    if depth == 0 {
                        let e = self.machine.eps(self.abs_root, s)?;
                        e.acc || e.abort
                    } else {
                        self.machine.cfg_nullable(acfg, s)?
                    }
                }
            };
            if !abs_ok {
                return Ok(Found::Counterexample(self.trace_from_path(start)));
            }
        }
        if depth == self.max_len {
            return Ok(Found::Clean);
        }
        let depth_left = (self.max_len - depth) as u8;
        if !self
            .memo
            .insert((depth_left, s, Self::abs_key(abs), conc))
        {
            return Ok(Found::Clean);
        }
        let n = self.machine.space.len() as StateId;
        // Program steps first, then environment steps, posts ascending.
        for post in 0..n {
            match self.step_child(start, s, abs, conc, depth, StepKind::Pgm, post)? {
                Found::Clean => {}
                other => return Ok(other),
            }
        }
        let env_posts = self.env_succ[s as usize].clone();
        for post in env_posts {
            match self.step_child(start, s, abs, conc, depth, StepKind::Env, post)? {
                Found::Clean => {}
                other => return Ok(other),
            }
        }
        Ok(Found::Clean)
    }

    #[allow(clippy::too_many_arguments)]
    fn step_child(
        &mut self,
        start: StateId,
        s: StateId,
        abs: AbsSide,
        conc: CfgId,
        depth: usize,
        kind: StepKind,
        post: StateId,
    ) -> Result<Found, CheckError> {
        let (conc_cfg, abs_side) = if depth == 0 {
            let (c0, _) = self.machine.start(self.conc_root, s)?;
            let (a0, a_abort) = self.machine.start(self.abs_root, s)?;
            let a = if a_abort { AbsSide::Covered } else { AbsSide::Live(a0) };
            (c0, a)
        } else {
            (conc, abs)
        };
        let (conc_next, _) = self.machine.step_cfg(conc_cfg, kind, s, post)?;
        if conc_next == CFG_EMPTY {
            // No live concrete residual: no accepted concrete extension.
            return Ok(Found::Clean);
        }
        let abs_next = match abs_side {
            AbsSide::Covered => AbsSide::Covered,
            AbsSide::Live(acfg) => {
                let (a, abort) = self.machine.step_cfg(acfg, kind, s, post)?;
                if abort {
                    AbsSide::Covered
                } else {
                    AbsSide::Live(a)
                }
            }
        };
        if let AbsSide::Covered = abs_next {
            // Everything below is covered by the abstract abort; no failure
            // can occur, so the subtree need not be explored.
            // (Covered also arises from start-abort at depth 0.)
            return Ok(Found::Clean);
        }
        self.path.push((kind, s, post));
        let r = self.dfs_finite(start, post, abs_next, conc_next, depth + 1)?;
        self.path.pop();
        Ok(r)
    }

    /// Lasso search: DFS over step paths; at every point where the current
    /// state closes a cycle, the lasso's infinite verdicts are compared.
    fn dfs_lassos(&mut self, start: StateId) -> Result<Found, CheckError> {
        let (conc0, _) = self.machine.start(self.conc_root, start)?;
        let (abs0, a_abort) = self.machine.start(self.abs_root, start)?;
        let abs = if a_abort { AbsSide::Covered } else { AbsSide::Live(abs0) };
        let mut states = vec![start];
        self.lasso_step(start, &mut states, abs, conc0)
    }

    fn lasso_step(
        &mut self,
        start: StateId,
        states: &mut Vec<StateId>,
        abs: AbsSide,
        conc: CfgId,
    ) -> Result<Found, CheckError> {
        let depth = self.path.len();
        if depth == self.max_len {
            return Ok(Found::Clean);
        }
        let s = *states.last().unwrap();
        self.visited += 1;
        if self.visited > self.budget {
            return Ok(Found::Budget);
        }
        let n = self.machine.space.len() as StateId;
        let mut try_step = |this: &mut Self,
                            kind: StepKind,
                            post: StateId|
         -> Result<Found, CheckError> {
            let (conc_next, _) = this.machine.step_cfg(conc, kind, s, post)?;
            if conc_next == CFG_EMPTY {
                return Ok(Found::Clean);
            }
            let abs_next = match abs {
                AbsSide::Covered => AbsSide::Covered,
                AbsSide::Live(acfg) => {
                    let (a, abort) = this.machine.step_cfg(acfg, kind, s, post)?;
                    if abort {
                        AbsSide::Covered
                    } else {
                        AbsSide::Live(a)
                    }
                }
            };
            if abs_next == AbsSide::Covered {
                return Ok(Found::Clean);
            }
            this.path.push((kind, s, post));
            states.push(post);
            // Close every cycle available from the new endpoint, then
            // extend.
            let mut result = Found::Clean;
            for loop_start in 0..this.path.len() {
                if states[loop_start] == post {
                    match this.check_lasso(start, loop_start)? {
                        Found::Clean => {}
                        other => {
                            result = other;
                            break;
                        }
                    }
                }
            }
            if matches!(result, Found::Clean) {
                result = this.lasso_step(start, states, abs_next, conc_next)?;
            }
            states.pop();
            this.path.pop();
            Ok(result)
        };
        for post in 0..n {
            match try_step(self, StepKind::Pgm, post)? {
                Found::Clean => {}
                other => return Ok(other),
            }
        }
        let env_posts = self.env_succ[s as usize].clone();
        for post in env_posts {
            match try_step(self, StepKind::Env, post)? {
                Found::Clean => {}
                other => return Ok(other),
            }
        }
        Ok(Found::Clean)
    }

    fn check_lasso(&mut self, start: StateId, loop_start: usize) -> Result<Found, CheckError> {
        self.traces_checked += 1;
        let trace = {
            let space = self.machine.space;
            let steps: Vec<Step> = self
                .path
                .iter()
                .map(|&(k, pre, post)| Step {
                    kind: k,
                    pre: space.state(pre).clone(),
                    post: space.state(post).clone(),
                })
                .collect();
            Trace::lasso(space.state(start).clone(), steps, loop_start)
        };
        if !trace.well_formed() {
            return Ok(Found::Clean);
        }
        let conc_v = {
            let mut ctx = InfCtx::new(&mut self.machine, &trace)?;
            ctx.verdict(self.conc_root, 0)?
        };
        if conc_v != InfVerdict::Acc {
            return Ok(Found::Clean);
        }
        let abs_v = {
            let mut ctx = InfCtx::new(&mut self.machine, &trace)?;
            ctx.verdict(self.abs_root, 0)?
        };
        if abs_v == InfVerdict::Rej {
            return Ok(Found::Counterexample(trace));
        }
        Ok(Found::Clean)
    }
}

/// Bounded refinement: every concrete behaviour up to the bound is allowed
/// by the abstract command (accepted, or covered by an abort at/before the
/// end). Validated at the bound, not proved.
pub fn refines(abs: &Command, conc: &Command, cfg: &CheckConfig) -> Result<CheckResult, CheckError> {
    let space = StateSpace::new(cfg.decls.clone())?;
    let mut search = Search::new(&space, abs, conc, cfg)?;
    let n = space.len() as StateId;
    for s in 0..n {
        match search.dfs_finite(s, s, AbsSide::Live(CFG_EMPTY), CFG_EMPTY, 0)? {
            Found::Clean => {}
            Found::Budget => {
                return Ok(CheckResult {
                    status: CheckStatus::BudgetExceeded {
                        visited: search.visited,
                    },
                    traces_checked: search.traces_checked,
                })
            }
            Found::Counterexample(trace) => {
                return finish_counterexample(abs, conc, &space, trace, search.traces_checked)
            }
        }
    }
    if cfg.include_lassos {
        for s in 0..n {
            search.path.clear();
            match search.dfs_lassos(s)? {
                Found::Clean => {}
                Found::Budget => {
                    return Ok(CheckResult {
                        status: CheckStatus::BudgetExceeded {
                            visited: search.visited,
                        },
                        traces_checked: search.traces_checked,
                    })
                }
                Found::Counterexample(trace) => {
                    return finish_counterexample(abs, conc, &space, trace, search.traces_checked)
                }
            }
        }
    }
    Ok(CheckResult {
        status: CheckStatus::Pass,
        traces_checked: search.traces_checked,
    })
}

fn finish_counterexample(
    abs: &Command,
    conc: &Command,
    space: &StateSpace,
    trace: Trace,
    traces_checked: u64,
) -> Result<CheckResult, CheckError> {
    // Replay through the matcher so the reported verdicts are exactly what
    // `accepts` reproduces.
    let mut machine = Machine::new(space);
    let abs_root = machine.compile(abs)?;
    let conc_root = machine.compile(conc)?;
    let concrete_verdict = accepts_in(&mut machine, conc_root, &trace)?;
    let abstract_verdict = accepts_in(&mut machine, abs_root, &trace)?;
    Ok(CheckResult {
        status: CheckStatus::Counterexample {
            trace,
            abstract_verdict,
            concrete_verdict,
        },
        traces_checked,
    })
}

/// Bounded equivalence: refinement in both directions.
pub fn equivalent(c1: &Command, c2: &Command, cfg: &CheckConfig) -> Result<CheckResult, CheckError> {
    let forward = refines(c1, c2, cfg)?;
    if !forward.passed() {
        return Ok(forward);
    }
    let backward = refines(c2, c1, cfg)?;
    Ok(CheckResult {
        status: backward.status,
        traces_checked: forward.traces_checked + backward.traces_checked,
    })
}

/// Law rely-with: `(rely r) ⋒ (with d c)  ⊑  with d ((rely r ∧ d'=d) ⋒ c)`.
pub fn check_law_rely_with(
    r: &StateRelation,
    d: &VarName,
    c: &Command,
    cfg: &CheckConfig,
) -> Result<CheckResult, CheckError> {
    let abs = Command::conj(
        Command::rely(r.clone()),
        Command::with(d.as_str(), c.clone()),
    );
    let strengthened = StateRelation::and(r.clone(), StateRelation::EqPrimed(d.clone()));
    let conc = Command::with(
        d.as_str(),
        Command::conj(Command::rely(strengthened), c.clone()),
    );
    refines(&abs, &conc, cfg)
}

/// Law guar-with: `(guar gd ∧ gx) ⋒ (with d c) ⊑ with d ((guar gx) ⋒ [gd] ⋒ c)`
/// where `gd` mentions only `d` and `gx` does not mention `d`.
pub fn check_law_guar_with(
    gd: &StateRelation,
    gx: &StateRelation,
    d: &VarName,
    c: &Command,
    cfg: &CheckConfig,
) -> Result<CheckResult, CheckError> {
    let gd_vars = gd.vars();
    if gd_vars.iter().any(|v| v != d) {
        return Err(CheckError::Precondition(format!(
            "g_d must mention only the resource `{d}`, found {gd_vars:?}"
        )));
    }
    if gx.vars().iter().any(|v| v == d) {
        return Err(CheckError::Precondition(format!(
            "g_x must not mention the resource `{d}`"
        )));
    }
    let abs = Command::conj(
        Command::guar(StateRelation::and(gd.clone(), gx.clone())),
        Command::with(d.as_str(), c.clone()),
    );
    let conc = Command::with(
        d.as_str(),
        Command::conj(
            Command::guar(gx.clone()),
            Command::conj(
                Command::spec(crate::kernel::Frame::All, gd.clone()),
                c.clone(),
            ),
        ),
    );
    refines(&abs, &conc, cfg)
}

/// Relation between adjacent commands in a derivation chain.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainRel {
    Refines,
    Equal,
}

pub struct ChainStep {
    pub lhs: Command,
    pub rel: ChainRel,
    pub rhs: Command,
    pub note: String,
}

/// Checks each step of a derivation chain at the configured bound.
pub fn check_derivation_chain(
    steps: &[ChainStep],
    cfg: &CheckConfig,
) -> Result<Vec<(String, CheckResult)>, CheckError> {
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let result = match step.rel {
            ChainRel::Refines => refines(&step.lhs, &step.rhs, cfg)?,
            ChainRel::Equal => equivalent(&step.lhs, &step.rhs, cfg)?,
        };
        out.push((step.note.clone(), result));
    }
    Ok(out)
}

/// Stability of `p` under `r`: for all state pairs, `p(s) ∧ r(s,s')` implies
/// `p(s')`. A counterexample is reported as a single environment step.
pub fn check_stability(
    p: &StatePredicate,
    r: &StateRelation,
    decls: &Decls,
) -> Result<CheckResult, CheckError> {
    let space = StateSpace::new(decls.clone())?;
    let mut pairs = 0u64;
    for pre in space.states() {
        if !eval_pred(p, space.decls(), pre)? {
            continue;
        }
        for post in space.states() {
            pairs += 1;
            if eval_rel(r, space.decls(), pre, post)? && !eval_pred(p, space.decls(), post)? {
                let trace = Trace::finite(
                    pre.clone(),
                    vec![Step {
                        kind: StepKind::Env,
                        pre: pre.clone(),
                        post: post.clone(),
                    }],
                );
                return Ok(CheckResult {
                    status: CheckStatus::Counterexample {
                        trace,
                        abstract_verdict: Verdict::Rejected {
                            at: 0,
                            reason: "predicate falsified by this step".into(),
                        },
                        concrete_verdict: Verdict::AcceptedTerminated,
                    },
                    traces_checked: pairs,
                });
            }
        }
    }
    Ok(CheckResult {
        status: CheckStatus::Pass,
        traces_checked: pairs,
    })
}
