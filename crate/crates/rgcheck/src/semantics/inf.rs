//! Verdicts of commands on lasso traces.
//!
//! A lasso is a concrete object, so infinite acceptance is decided by
//! structural recursion over the command: safety commands (rely, guar)
//! accept by scanning the prefix plus one cycle; `encode` defers to the
//! exact temporal evaluator; `with` accepts only by never committing to its
//! body; omega iteration accepts iff segments can close infinitely often
//! (a cycle through a segment-closure in its run graph) or a final segment
//! itself accepts the infinite suffix. Abort positions are reported as step
//! distances from the start of the trace (positions within the prefix plus
//! first cycle).

use std::collections::HashMap;

use crate::kernel::{StateId, TemporalFormula};
use crate::semantics::machine::{CfgId, CmdId, CmdNode, Machine, SemError, CFG_EMPTY};
use crate::temporal::eval_temporal_at;
use crate::traces::{StepKind, Trace, TraceShape};

/// Infinite-trace verdict; `Abort` carries a step distance from the
/// evaluation start.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InfVerdict {
    Acc,
    Abort(usize),
    Rej,
}

impl InfVerdict {
    fn better_abort(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

pub struct InfCtx<'m, 'a> {
    pub machine: &'m mut Machine<'a>,
    trace: &'m Trace,
    steps: Vec<(StepKind, StateId, StateId)>,
    loop_start: usize,
    memo: HashMap<(CmdId, usize), InfVerdict>,
}

impl<'m, 'a> InfCtx<'m, 'a> {
    pub fn new(machine: &'m mut Machine<'a>, trace: &'m Trace) -> Result<Self, SemError> {
        let loop_start = match trace.shape {
            TraceShape::Lasso { loop_start } => loop_start,
            TraceShape::Finite => return Err(SemError::IllFormedTrace),
        };
        if !trace.well_formed() || trace.is_empty() {
            return Err(SemError::IllFormedTrace);
        }
        let mut steps = Vec::with_capacity(trace.len());
        for (i, s) in trace.steps.iter().enumerate() {
            let pre = machine.state_id(&s.pre, i)?;
            let post = machine.state_id(&s.post, i + 1)?;
            steps.push((s.kind, pre, post));
        }
        Ok(InfCtx {
            machine,
            trace,
            steps,
            loop_start,
            memo: HashMap::new(),
        })
    }

    fn len(&self) -> usize {
        self.steps.len()
    }

    fn cycle_len(&self) -> usize {
        self.len() - self.loop_start
    }

    fn norm(&self, pos: usize) -> usize {
        if pos < self.len() {
            pos
        } else {
            self.loop_start + (pos - self.loop_start) % self.cycle_len()
        }
    }

    fn state_at(&self, pos: usize) -> StateId {
        let p = self.norm(pos);
        self.steps[p].1
    }

    fn step_at(&self, pos: usize) -> (StepKind, StateId, StateId) {
        self.steps[self.norm(pos)]
    }

    /// Number of step distances that cover every distinct position from
    /// `pos` on (remaining prefix plus one full cycle).
    fn scan_len(&self, pos: usize) -> usize {
        if pos < self.loop_start {
            self.len() - pos
        } else {
            self.cycle_len()
        }
    }

    /// Deterministic finite run of a command's residuals along the lasso
    /// from `pos`: the positions are fixed by the trace, so the run is a
    /// single config sequence until it dies or repeats.
    fn fin_run(&mut self, cmd: CmdId, pos: usize) -> Result<FinRun, SemError> {
        let s0 = self.state_at(pos);
        let (mut cfg, abort0) = self.machine.start(cmd, s0)?;
        let mut run = FinRun::default();
        if abort0 {
            run.abort = Some(0);
        }
        if self.machine.eps(cmd, s0)?.acc {
            run.push_end(self.norm(pos), 0);
        }
        let mut seen: HashMap<(usize, CfgId), ()> = HashMap::new();
        let mut d = 0usize;
        loop {
            let p = self.norm(pos + d);
            if cfg == CFG_EMPTY || seen.insert((p, cfg), ()).is_some() {
                break;
            }
            // d > 0 ends are recorded via node nullability.
            if d > 0 && self.machine.cfg_nullable(cfg, self.state_at(pos + d))? {
                run.push_end(p, d);
            }
            let (kind, pre, post) = self.step_at(pos + d);
            let (next, abort) = self.machine.step_cfg(cfg, kind, pre, post)?;
            if abort && run.abort.is_none() {
                run.abort = Some(d);
            }
            cfg = next;
            d += 1;
        }
        // The loop above checks nullability before stepping; the final
        // config (if alive and unseen-break) was already handled on entry.
        Ok(run)
    }

    /// Is the command's run from `pos` still viable (alive or aborted) after
    /// `dist` steps? Abort counts as viable: an aborted command permits any
    /// prefix.
    fn alive_until(&mut self, cmd: CmdId, pos: usize, dist: usize) -> Result<bool, SemError> {
        let s0 = self.state_at(pos);
        let (mut cfg, abort0) = self.machine.start(cmd, s0)?;
        if abort0 {
            return Ok(true);
        }
        for d in 0..dist {
            if cfg == CFG_EMPTY {
                return Ok(false);
            }
            let (kind, pre, post) = self.step_at(pos + d);
            let (next, abort) = self.machine.step_cfg(cfg, kind, pre, post)?;
            if abort {
                return Ok(true);
            }
            cfg = next;
        }
        Ok(cfg != CFG_EMPTY)
    }

    pub fn verdict(&mut self, cmd: CmdId, pos: usize) -> Result<InfVerdict, SemError> {
        let key = (cmd, self.norm(pos));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        // Guard against recursive cycles through seq/iter subcommands: the
        // recursion descends the command structure, so a placeholder is not
        // needed, but memoize after computing.
        let v = self.verdict_inner(cmd, self.norm(pos))?;
        self.memo.insert(key, v);
        Ok(v)
    }

    fn verdict_inner(&mut self, cmd: CmdId, pos: usize) -> Result<InfVerdict, SemError> {
        match self.machine.cmd(cmd).clone() {
            CmdNode::Spec { .. } | CmdNode::Term | CmdNode::EnvAtomic(_) => Ok(InfVerdict::Rej),
            CmdNode::Pre(p) => {
                let ok = self.machine.eval_pred_id(p, self.state_at(pos))?;
                if ok {
                    Ok(InfVerdict::Rej)
                } else {
                    Ok(InfVerdict::Abort(0))
                }
            }
            CmdNode::Rely(r) => {
                for d in 0..self.scan_len(pos) {
                    let (kind, pre, post) = self.step_at(pos + d);
                    if kind == StepKind::Env && !self.machine.eval_rel_id(r, pre, post)? {
                        return Ok(InfVerdict::Abort(d));
                    }
                }
                Ok(InfVerdict::Acc)
            }
            CmdNode::Guar(g) => {
                for d in 0..self.scan_len(pos) {
                    let (kind, pre, post) = self.step_at(pos + d);
                    if kind == StepKind::Pgm && !self.machine.eval_rel_id(g, pre, post)? {
                        return Ok(InfVerdict::Rej);
                    }
                }
                Ok(InfVerdict::Acc)
            }
            CmdNode::Encode(f) => {
                let formula = self.machine.formula(f).clone();
                let ok = eval_temporal_at(&formula, self.trace, self.machine.space.decls(), pos)?;
                Ok(if ok { InfVerdict::Acc } else { InfVerdict::Rej })
            }
            CmdNode::Conj(a, b) => {
                let va = self.verdict(a, pos)?;
                let vb = self.verdict(b, pos)?;
                let mut abort = None;
                if let InfVerdict::Abort(d) = va {
                    let valid = matches!(vb, InfVerdict::Acc) || self.alive_until(b, pos, d)?;
                    if valid {
                        abort = InfVerdict::better_abort(abort, Some(d));
                    }
                }
                if let InfVerdict::Abort(d) = vb {
                    let valid = matches!(va, InfVerdict::Acc) || self.alive_until(a, pos, d)?;
                    if valid {
                        abort = InfVerdict::better_abort(abort, Some(d));
                    }
                }
                if let Some(d) = abort {
                    return Ok(InfVerdict::Abort(d));
                }
                if va == InfVerdict::Acc && vb == InfVerdict::Acc {
                    Ok(InfVerdict::Acc)
                } else {
                    Ok(InfVerdict::Rej)
                }
            }
            CmdNode::Choice(a, b) => {
                let va = self.verdict(a, pos)?;
                let vb = self.verdict(b, pos)?;
                if va == InfVerdict::Acc || vb == InfVerdict::Acc {
                    return Ok(InfVerdict::Acc);
                }
                let abort = InfVerdict::better_abort(
                    match va {
                        InfVerdict::Abort(d) => Some(d),
                        _ => None,
                    },
                    match vb {
                        InfVerdict::Abort(d) => Some(d),
                        _ => None,
                    },
                );
                Ok(match abort {
                    Some(d) => InfVerdict::Abort(d),
                    None => InfVerdict::Rej,
                })
            }
            CmdNode::Seq(a, b) => {
                let mut abort = None;
                match self.verdict(a, pos)? {
                    InfVerdict::Acc => return Ok(InfVerdict::Acc),
                    InfVerdict::Abort(d) => abort = Some(d),
                    InfVerdict::Rej => {}
                }
                let run = self.fin_run(a, pos)?;
                abort = InfVerdict::better_abort(abort, run.abort);
                let mut acc = false;
                for &(endpos, dist) in &run.ends {
                    match self.verdict(b, endpos)? {
                        InfVerdict::Acc => acc = true,
                        InfVerdict::Abort(d) => {
                            abort = InfVerdict::better_abort(abort, Some(dist + d));
                        }
                        InfVerdict::Rej => {}
                    }
                }
                if acc {
                    Ok(InfVerdict::Acc)
                } else if let Some(d) = abort {
                    Ok(InfVerdict::Abort(d))
                } else {
                    Ok(InfVerdict::Rej)
                }
            }
            CmdNode::Iter(c) => self.iter_verdict(c, pos),
            CmdNode::With {
                resource,
                guard,
                body,
            } => self.with_verdict(cmd, resource, guard, body, pos),
        }
    }

    fn iter_verdict(&mut self, c: CmdId, pos: usize) -> Result<InfVerdict, SemError> {
        // Run graph over (position, segment config); closure edges reset the
        // segment. Acceptance: a reachable cycle containing both a step edge
        // and a closure edge (infinitely many finite segments), or a closure
        // point from which the segment command itself accepts the infinite
        // suffix.
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        struct GNode {
            pos: usize,
            cfg: CfgId,
        }
        let mut abort: Option<usize> = None;
        let mut nodes: Vec<GNode> = Vec::new();
        let mut ids: HashMap<GNode, usize> = HashMap::new();
        let mut edges: Vec<(usize, usize, bool)> = Vec::new(); // (from, to, is_closure)
        let mut closure_points: Vec<(usize, usize)> = Vec::new(); // (pos, dist)

        let intern = |nodes: &mut Vec<GNode>, ids: &mut HashMap<GNode, usize>, n: GNode| {
            if let Some(&i) = ids.get(&n) {
                (i, false)
            } else {
                let i = nodes.len();
                nodes.push(n);
                ids.insert(n, i);
                (i, true)
            }
        };

        // Seed: a segment starting at pos (zero previous segments).
        closure_points.push((pos, 0));
        let s0 = self.state_at(pos);
        let (cfg0, abort0) = self.machine.start(c, s0)?;
        if abort0 {
            abort = Some(0);
        }
        let (seed, _) = intern(&mut nodes, &mut ids, GNode { pos, cfg: cfg0 });
        let mut work: Vec<(usize, usize)> = vec![(seed, 0)]; // (node, dist)
        let mut dist_of: HashMap<usize, usize> = HashMap::new();
        dist_of.insert(seed, 0);

        while let Some((ni, dist)) = work.pop() {
            let GNode { pos: p, cfg } = nodes[ni];
            if cfg == CFG_EMPTY {
                continue;
            }
            let sp = self.state_at(p);
            // Closure: the active segment can end here; a fresh segment
            // starts at the same position.
            if self.machine.cfg_nullable(cfg, sp)? {
                closure_points.push((p, dist));
                let (fresh, fa) = self.machine.start(c, sp)?;
                if fa {
                    abort = InfVerdict::better_abort(abort, Some(dist));
                }
                let (ti, new) = intern(&mut nodes, &mut ids, GNode { pos: p, cfg: fresh });
                edges.push((ni, ti, true));
                if new {
                    dist_of.insert(ti, dist);
                    work.push((ti, dist));
                }
            }
            // Step.
            let (kind, pre, post) = self.step_at(p);
            let (next, a) = self.machine.step_cfg(cfg, kind, pre, post)?;
            if a {
                abort = InfVerdict::better_abort(abort, Some(dist));
            }
            if next != CFG_EMPTY {
                let np = self.norm(p + 1);
                let (ti, new) = intern(&mut nodes, &mut ids, GNode { pos: np, cfg: next });
                edges.push((ni, ti, false));
                if new {
                    dist_of.insert(ti, dist + 1);
                    work.push((ti, dist + 1));
                }
            }
        }

        // Final-segment-infinite alternative.
        let mut seen_cp: HashMap<usize, usize> = HashMap::new();
        for &(p, d) in &closure_points {
            let e = seen_cp.entry(p).or_insert(d);
            *e = (*e).min(d);
        }
        for (&p, &d) in &seen_cp {
            match self.verdict(c, p)? {
                InfVerdict::Acc => return Ok(InfVerdict::Acc),
                InfVerdict::Abort(d2) => {
                    abort = InfVerdict::better_abort(abort, Some(d + d2));
                }
                InfVerdict::Rej => {}
            }
        }

        // Buchi condition: an SCC with a closure edge and a step edge.
        if scc_with_both_edge_kinds(nodes.len(), &edges) {
            return Ok(InfVerdict::Acc);
        }
        Ok(match abort {
            Some(d) => InfVerdict::Abort(d),
            None => InfVerdict::Rej,
        })
    }

    fn with_verdict(
        &mut self,
        _cmd: CmdId,
        resource: usize,
        guard: Option<crate::semantics::machine::PredId>,
        body: CmdId,
        pos: usize,
    ) -> Result<InfVerdict, SemError> {
        // Never committing is the only way a `with` accepts an infinite
        // suffix: every program step from here on must stutter. An await is
        // additionally weakly fair: blocking forever is allowed only if the
        // guard is not eventually-always true.
        let mut all_pgm_stutter = true;
        for d in 0..self.scan_len(pos) {
            let (kind, pre, post) = self.step_at(pos + d);
            if kind == StepKind::Pgm && pre != post {
                all_pgm_stutter = false;
                break;
            }
        }
        let mut acc = false;
        if all_pgm_stutter {
            acc = match guard {
                None => true,
                Some(p) => {
                    let pred = self.machine.pred(p).clone();
                    let enabled_forever = eval_temporal_at(
                        &TemporalFormula::eventually(TemporalFormula::always(
                            TemporalFormula::atom(pred),
                        )),
                        self.trace,
                        self.machine.space.decls(),
                        pos,
                    )?;
                    !enabled_forever
                }
            };
        }

        // Committed bodies cannot accept an infinite suffix (bodies
        // terminate, post-body stuttering is finite), but they can abort.
        let mut abort: Option<usize> = None;
        let mut d = 0usize;
        let mut seen_commit: HashMap<usize, ()> = HashMap::new();
        loop {
            if d >= self.scan_len(pos) + self.cycle_len() {
                break;
            }
            let p = self.norm(pos + d);
            if seen_commit.insert(p, ()).is_none() {
                let sp = self.state_at(pos + d);
                let guard_ok = match guard {
                    None => true,
                    Some(g) => self.machine.eval_pred_id(g, sp)?,
                };
                if guard_ok {
                    let (mut cfg, a0) = self.machine.start(body, sp)?;
                    if a0 {
                        abort = InfVerdict::better_abort(abort, Some(d));
                    }
                    // Deterministic body run under exclusivity.
                    let mut bd = 0usize;
                    let mut seen: HashMap<(usize, CfgId), ()> = HashMap::new();
                    loop {
                        let bp = self.norm(pos + d + bd);
                        if cfg == CFG_EMPTY || seen.insert((bp, cfg), ()).is_some() {
                            break;
                        }
                        let (kind, pre, post) = self.step_at(pos + d + bd);
                        if kind == StepKind::Env
                            && self.machine_resource_changed(resource, pre, post)
                        {
                            break;
                        }
                        let (next, a) = self.machine.step_cfg(cfg, kind, pre, post)?;
                        if a {
                            abort = InfVerdict::better_abort(abort, Some(d + bd));
                        }
                        cfg = next;
                        bd += 1;
                    }
                }
            }
            // The pre-body region admits program stutters and any env step.
            let (kind, pre, post) = self.step_at(pos + d);
            if kind == StepKind::Pgm && pre != post {
                break;
            }
            d += 1;
        }

        if acc {
            Ok(InfVerdict::Acc)
        } else if let Some(d) = abort {
            Ok(InfVerdict::Abort(d))
        } else {
            Ok(InfVerdict::Rej)
        }
    }

    fn machine_resource_changed(&mut self, resource: usize, pre: StateId, post: StateId) -> bool {
        let a = self.machine.space.state(pre);
        let b = self.machine.space.state(post);
        a.bindings[resource] != b.bindings[resource]
    }
}

#[derive(Default)]
struct FinRun {
    /// (normalized end position, minimal step distance), deduped by position.
    ends: Vec<(usize, usize)>,
    abort: Option<usize>,
}

impl FinRun {
    fn push_end(&mut self, pos: usize, dist: usize) {
        if !self.ends.iter().any(|&(p, _)| p == pos) {
            self.ends.push((pos, dist));
        }
    }
}

/// Tarjan SCC, returning whether some strongly connected component contains
/// both a closure edge and a step edge.
fn scc_with_both_edge_kinds(n: usize, edges: &[(usize, usize, bool)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for &(a, b, c) in edges {
        adj[a].push((b, c));
    }
    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0usize;
    let mut comp_count = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei < adj[v].len() {
                let (w, _) = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    // An SCC qualifies if it contains both edge kinds among its internal
    // edges (single-node components need self-loops, which the edge list
    // captures naturally).
    let mut has_step = vec![false; comp_count];
    let mut has_closure = vec![false; comp_count];
    for &(a, b, closure) in edges {
        if comp[a] == comp[b] {
            if closure {
                has_closure[comp[a]] = true;
            } else {
                has_step[comp[a]] = true;
            }
        }
    }
    (0..comp_count).any(|c| has_step[c] && has_closure[c])
}
