//! The residual matching machine.
//!
//! A command is compiled to an arena of sub-commands; matching a trace
//! maintains a set of residual nodes, each one viable way the steps consumed
//! so far can be decomposed. Stepping a node yields the alternatives for the
//! next step (nondeterminism in decomposition becomes set union) together
//! with an abort flag when some alternative aborts at the current position.
//! Nodes, node sets and step results are hash-consed and memoized, so
//! repeated intervals are matched once.

use std::collections::HashMap;

use crate::kernel::{
    eval_pred, eval_rel, Command, Frame, KernelError, State, StateId, StatePredicate,
    StateRelation, StateSpace, TemporalFormula,
};
use crate::temporal::{final_eval, progress};
use crate::traces::{Step, StepKind};

pub type CmdId = u32;
pub type RelId = u32;
pub type PredId = u32;
pub type FormulaId = u32;
pub type NodeId = u32;
pub type CfgId = u32;

/// Empty node set; interned first so the id is stable.
pub const CFG_EMPTY: CfgId = 0;

/// Flattened command.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CmdNode {
    Spec { frame: u64, post: RelId },
    Pre(PredId),
    Rely(RelId),
    Guar(RelId),
    Conj(CmdId, CmdId),
    Seq(CmdId, CmdId),
    Choice(CmdId, CmdId),
    Iter(CmdId),
    With {
        resource: usize,
        guard: Option<PredId>,
        body: CmdId,
    },
    EnvAtomic(RelId),
    Term,
    Encode(FormulaId),
}

/// Residual node: one viable decomposition state.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Rely(RelId),
    Guar(RelId),
    Spec {
        frame: u64,
        post: RelId,
        init: StateId,
        moved: bool,
    },
    Term,
    Enc(FormulaId),
    Conj(NodeId, NodeId),
    /// Left operand still active; right command not yet started.
    Seq(NodeId, CmdId),
    /// Omega iteration with an active segment.
    Iter(CmdId, NodeId),
    /// Stuttering before the body of `with` (the await retry loop).
    WithBefore(CmdId),
    WithInside(CmdId, NodeId),
    WithAfter,
    /// Waiting for the designated environment step.
    EnvWait(RelId),
    EnvDone,
}

/// Result of starting or stepping: alternatives plus whether some
/// alternative aborts at the current position.
#[derive(Clone, Debug, Default)]
pub struct Alt {
    pub nodes: Vec<NodeId>,
    pub abort: bool,
}

/// Empty-trace acceptance of a command from a state.
#[derive(Clone, Copy, Debug, Default)]
pub struct Eps {
    pub acc: bool,
    pub abort: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum SemError {
    #[error("kernel error: {0}")]
    Kernel(#[from] KernelError),
    #[error("trace state at position {0} is outside the declared state space")]
    StateOutsideSpace(usize),
    #[error("trace is not well-formed")]
    IllFormedTrace,
    #[error("search budget exhausted after {visited} configurations")]
    Budget { visited: u64 },
}

pub struct Machine<'a> {
    pub space: &'a StateSpace,
    cmds: Vec<CmdNode>,
    rels: Vec<StateRelation>,
    rel_ids: HashMap<StateRelation, RelId>,
    preds: Vec<StatePredicate>,
    pred_ids: HashMap<StatePredicate, PredId>,
    formulas: Vec<TemporalFormula>,
    formula_ids: HashMap<TemporalFormula, FormulaId>,
    nodes: Vec<Node>,
    node_ids: HashMap<Node, NodeId>,
    cfgs: Vec<Vec<NodeId>>,
    cfg_ids: HashMap<Vec<NodeId>, CfgId>,
    rel_cache: HashMap<(RelId, StateId, StateId), bool>,
    pred_cache: HashMap<(PredId, StateId), bool>,
    eps_cache: HashMap<(CmdId, StateId), Eps>,
    start_cache: HashMap<(CmdId, StateId), (CfgId, bool)>,
    nullable_cache: HashMap<(NodeId, StateId), bool>,
    node_step_cache: HashMap<(NodeId, u64), (CfgId, bool)>,
    cfg_step_cache: HashMap<(CfgId, u64), (CfgId, bool)>,
    cfg_nullable_cache: HashMap<(CfgId, StateId), bool>,
    diff_cache: HashMap<(StateId, StateId), u64>,
}

fn step_key(kind: StepKind, pre: StateId, post: StateId) -> u64 {
    let k = match kind {
        StepKind::Pgm => 0u64,
        StepKind::Env => 1u64,
    };
    (k << 63) | ((pre as u64) << 32) | post as u64
}

impl<'a> Machine<'a> {
    pub fn new(space: &'a StateSpace) -> Self {
        let mut m = Machine {
            space,
            cmds: Vec::new(),
            rels: Vec::new(),
            rel_ids: HashMap::new(),
            preds: Vec::new(),
            pred_ids: HashMap::new(),
            formulas: Vec::new(),
            formula_ids: HashMap::new(),
            nodes: Vec::new(),
            node_ids: HashMap::new(),
            cfgs: Vec::new(),
            cfg_ids: HashMap::new(),
            rel_cache: HashMap::new(),
            pred_cache: HashMap::new(),
            eps_cache: HashMap::new(),
            start_cache: HashMap::new(),
            nullable_cache: HashMap::new(),
            node_step_cache: HashMap::new(),
            cfg_step_cache: HashMap::new(),
            cfg_nullable_cache: HashMap::new(),
            diff_cache: HashMap::new(),
        };
        let empty = m.intern_cfg(Vec::new());
        debug_assert_eq!(empty, CFG_EMPTY);
        m
    }

    pub fn intern_rel(&mut self, r: &StateRelation) -> RelId {
        if let Some(&id) = self.rel_ids.get(r) {
            return id;
        }
        let id = self.rels.len() as RelId;
        self.rels.push(r.clone());
        self.rel_ids.insert(r.clone(), id);
        id
    }

    fn intern_pred(&mut self, p: &StatePredicate) -> PredId {
        if let Some(&id) = self.pred_ids.get(p) {
            return id;
        }
        let id = self.preds.len() as PredId;
        self.preds.push(p.clone());
        self.pred_ids.insert(p.clone(), id);
        id
    }

    pub fn intern_formula(&mut self, f: &TemporalFormula) -> FormulaId {
        if let Some(&id) = self.formula_ids.get(f) {
            return id;
        }
        let id = self.formulas.len() as FormulaId;
        self.formulas.push(f.clone());
        self.formula_ids.insert(f.clone(), id);
        id
    }

    pub fn formula(&self, id: FormulaId) -> &TemporalFormula {
        &self.formulas[id as usize]
    }

    pub fn pred(&self, id: PredId) -> &StatePredicate {
        &self.preds[id as usize]
    }

    pub fn intern_node(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.node_ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n.clone());
        self.node_ids.insert(n, id);
        id
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn intern_cfg(&mut self, mut nodes: Vec<NodeId>) -> CfgId {
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&id) = self.cfg_ids.get(&nodes) {
            return id;
        }
        let id = self.cfgs.len() as CfgId;
        self.cfgs.push(nodes.clone());
        self.cfg_ids.insert(nodes, id);
        id
    }

    pub fn cfg(&self, id: CfgId) -> &[NodeId] {
        &self.cfgs[id as usize]
    }

    pub fn cmd(&self, id: CmdId) -> &CmdNode {
        &self.cmds[id as usize]
    }

    /// Flattens a command into the arena, resolving names against the space.
    pub fn compile(&mut self, cmd: &Command) -> Result<CmdId, SemError> {
        let node = match cmd {
            Command::Spec { frame, post } => {
                let mask = self.frame_mask(frame)?;
                let post = self.intern_rel(post);
                CmdNode::Spec { frame: mask, post }
            }
            Command::Pre(p) => CmdNode::Pre(self.intern_pred(p)),
            Command::Rely(r) => CmdNode::Rely(self.intern_rel(r)),
            Command::Guar(g) => CmdNode::Guar(self.intern_rel(g)),
            Command::Conj(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                CmdNode::Conj(a, b)
            }
            Command::Seq(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                CmdNode::Seq(a, b)
            }
            Command::Choice(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                CmdNode::Choice(a, b)
            }
            Command::IterOmega(c) => {
                let c = self.compile(c)?;
                CmdNode::Iter(c)
            }
            Command::With { resource, body } => {
                let idx = self.space.decls().index_of(resource).map_err(SemError::Kernel)?;
                let body = self.compile(body)?;
                CmdNode::With {
                    resource: idx,
                    guard: None,
                    body,
                }
            }
            Command::AwaitWith {
                resource,
                guard,
                body,
            } => {
                let idx = self.space.decls().index_of(resource).map_err(SemError::Kernel)?;
                let guard = self.intern_pred(guard);
                let body = self.compile(body)?;
                CmdNode::With {
                    resource: idx,
                    guard: Some(guard),
                    body,
                }
            }
            Command::EnvAtomic(r) => CmdNode::EnvAtomic(self.intern_rel(r)),
            Command::Term => CmdNode::Term,
            Command::Encode(f) => CmdNode::Encode(self.intern_formula(f)),
        };
        let id = self.cmds.len() as CmdId;
        self.cmds.push(node);
        Ok(id)
    }

    fn frame_mask(&self, frame: &Frame) -> Result<u64, SemError> {
        match frame {
            Frame::All => Ok(u64::MAX),
            Frame::Of(vars) => {
                let mut mask = 0u64;
                for v in vars {
                    let idx = self.space.decls().index_of(v).map_err(SemError::Kernel)?;
                    mask |= 1u64 << idx;
                }
                Ok(mask)
            }
        }
    }

    pub fn eval_rel_id(&mut self, r: RelId, pre: StateId, post: StateId) -> Result<bool, SemError> {
        if let Some(&v) = self.rel_cache.get(&(r, pre, post)) {
            return Ok(v);
        }
        let v = eval_rel(
            &self.rels[r as usize],
            self.space.decls(),
            self.space.state(pre),
            self.space.state(post),
        )?;
        self.rel_cache.insert((r, pre, post), v);
        Ok(v)
    }

    pub fn eval_pred_id(&mut self, p: PredId, s: StateId) -> Result<bool, SemError> {
        if let Some(&v) = self.pred_cache.get(&(p, s)) {
            return Ok(v);
        }
        let v = eval_pred(&self.preds[p as usize], self.space.decls(), self.space.state(s))?;
        self.pred_cache.insert((p, s), v);
        Ok(v)
    }

    /// Bitmask of variables whose bindings differ between two states.
    fn diff_mask(&mut self, a: StateId, b: StateId) -> u64 {
        if a == b {
            return 0;
        }
        if let Some(&m) = self.diff_cache.get(&(a, b)) {
            return m;
        }
        let sa = self.space.state(a);
        let sb = self.space.state(b);
        let mut mask = 0u64;
        for (i, (x, y)) in sa.bindings.iter().zip(&sb.bindings).enumerate() {
            if x != y {
                mask |= 1u64 << i;
            }
        }
        self.diff_cache.insert((a, b), mask);
        mask
    }

    fn resource_changed(&mut self, resource: usize, pre: StateId, post: StateId) -> bool {
        self.diff_mask(pre, post) & (1u64 << resource) != 0
    }

    /// Empty-trace acceptance from `s`.
    pub fn eps(&mut self, cmd: CmdId, s: StateId) -> Result<Eps, SemError> {
        if let Some(&e) = self.eps_cache.get(&(cmd, s)) {
            return Ok(e);
        }
        let e = match self.cmd(cmd).clone() {
            CmdNode::Spec { post, .. } => Eps {
                acc: self.eval_rel_id(post, s, s)?,
                abort: false,
            },
            CmdNode::Pre(p) => {
                let ok = self.eval_pred_id(p, s)?;
                Eps {
                    acc: ok,
                    abort: !ok,
                }
            }
            CmdNode::Rely(_) | CmdNode::Guar(_) | CmdNode::Term => Eps {
                acc: true,
                abort: false,
            },
            CmdNode::Encode(f) => {
                let formula = self.formula(f).clone();
                Eps {
                    acc: final_eval(&formula, self.space.decls(), self.space.state(s))?,
                    abort: false,
                }
            }
            CmdNode::Conj(a, b) => {
                let ea = self.eps(a, s)?;
                let eb = self.eps(b, s)?;
                Eps {
                    acc: ea.acc && eb.acc,
                    abort: ea.abort || eb.abort,
                }
            }
            CmdNode::Choice(a, b) => {
                let ea = self.eps(a, s)?;
                let eb = self.eps(b, s)?;
                Eps {
                    acc: ea.acc || eb.acc,
                    abort: ea.abort || eb.abort,
                }
            }
            CmdNode::Seq(a, b) => {
                let ea = self.eps(a, s)?;
                let eb = self.eps(b, s)?;
                Eps {
                    acc: ea.acc && eb.acc,
                    abort: ea.abort || (ea.acc && eb.abort),
                }
            }
            CmdNode::Iter(c) => {
                let ec = self.eps(c, s)?;
                Eps {
                    acc: true,
                    abort: ec.abort,
                }
            }
            CmdNode::With { guard, body, .. } => {
                let g = match guard {
                    None => true,
                    Some(p) => self.eval_pred_id(p, s)?,
                };
                if g {
                    let eb = self.eps(body, s)?;
                    Eps {
                        acc: eb.acc,
                        abort: eb.abort,
                    }
                } else {
                    Eps {
                        acc: false,
                        abort: false,
                    }
                }
            }
            CmdNode::EnvAtomic(_) => Eps {
                acc: false,
                abort: false,
            },
        };
        self.eps_cache.insert((cmd, s), e);
        Ok(e)
    }

    /// Initial residual nodes from `s`, as an interned config.
    pub fn start(&mut self, cmd: CmdId, s: StateId) -> Result<(CfgId, bool), SemError> {
        if let Some(&r) = self.start_cache.get(&(cmd, s)) {
            return Ok(r);
        }
        let alt = self.start_nodes(cmd, s)?;
        let cfg = self.intern_cfg(alt.nodes);
        self.start_cache.insert((cmd, s), (cfg, alt.abort));
        Ok((cfg, alt.abort))
    }

    fn start_nodes(&mut self, cmd: CmdId, s: StateId) -> Result<Alt, SemError> {
        let out = match self.cmd(cmd).clone() {
            CmdNode::Spec { frame, post } => Alt {
                nodes: vec![self.intern_node(Node::Spec {
                    frame,
                    post,
                    init: s,
                    moved: false,
                })],
                abort: false,
            },
            CmdNode::Pre(p) => {
                let ok = self.eval_pred_id(p, s)?;
                Alt {
                    nodes: Vec::new(),
                    abort: !ok,
                }
            }
            CmdNode::Rely(r) => Alt {
                nodes: vec![self.intern_node(Node::Rely(r))],
                abort: false,
            },
            CmdNode::Guar(g) => Alt {
                nodes: vec![self.intern_node(Node::Guar(g))],
                abort: false,
            },
            CmdNode::Term => Alt {
                nodes: vec![self.intern_node(Node::Term)],
                abort: false,
            },
            CmdNode::Encode(f) => Alt {
                nodes: vec![self.intern_node(Node::Enc(f))],
                abort: false,
            },
            CmdNode::Conj(a, b) => {
                let aa = self.start_nodes(a, s)?;
                let ab = self.start_nodes(b, s)?;
                let mut nodes = Vec::with_capacity(aa.nodes.len() * ab.nodes.len());
                for &x in &aa.nodes {
                    for &y in &ab.nodes {
                        nodes.push(self.intern_node(Node::Conj(x, y)));
                    }
                }
                Alt {
                    nodes,
                    abort: aa.abort || ab.abort,
                }
            }
            CmdNode::Choice(a, b) => {
                let mut aa = self.start_nodes(a, s)?;
                let ab = self.start_nodes(b, s)?;
                aa.nodes.extend(ab.nodes);
                Alt {
                    nodes: aa.nodes,
                    abort: aa.abort || ab.abort,
                }
            }
            CmdNode::Seq(a, b) => {
                let aa = self.start_nodes(a, s)?;
                let mut nodes: Vec<NodeId> = aa
                    .nodes
                    .iter()
                    .map(|&x| self.intern_node(Node::Seq(x, b)))
                    .collect();
                let mut abort = aa.abort;
                let ea = self.eps(a, s)?;
                if ea.acc {
                    let ab = self.start_nodes(b, s)?;
                    nodes.extend(ab.nodes);
                    abort = abort || ab.abort;
                }
                Alt { nodes, abort }
            }
            CmdNode::Iter(c) => {
                let ac = self.start_nodes(c, s)?;
                let nodes = ac
                    .nodes
                    .iter()
                    .map(|&x| self.intern_node(Node::Iter(c, x)))
                    .collect();
                Alt {
                    nodes,
                    abort: ac.abort,
                }
            }
            CmdNode::With { .. } => Alt {
                nodes: vec![self.intern_node(Node::WithBefore(cmd))],
                abort: false,
            },
            CmdNode::EnvAtomic(r) => Alt {
                nodes: vec![self.intern_node(Node::EnvWait(r))],
                abort: false,
            },
        };
        Ok(out)
    }

    /// Can this residual terminate right now in state `s`?
    pub fn nullable(&mut self, node: NodeId, s: StateId) -> Result<bool, SemError> {
        if let Some(&v) = self.nullable_cache.get(&(node, s)) {
            return Ok(v);
        }
        let v = match self.node(node).clone() {
            Node::Rely(_) | Node::Guar(_) | Node::Term | Node::WithAfter | Node::EnvDone => true,
            Node::EnvWait(_) => false,
            Node::Spec { post, init, .. } => self.eval_rel_id(post, init, s)?,
            Node::Enc(f) => {
                let formula = self.formula(f).clone();
                final_eval(&formula, self.space.decls(), self.space.state(s))?
            }
            Node::Conj(a, b) => self.nullable(a, s)? && self.nullable(b, s)?,
            Node::Seq(a, b) => self.nullable(a, s)? && self.eps(b, s)?.acc,
            Node::Iter(_, seg) => self.nullable(seg, s)?,
            Node::WithBefore(w) => {
                let (guard, body) = self.with_parts(w);
                let g = match guard {
                    None => true,
                    Some(p) => self.eval_pred_id(p, s)?,
                };
                g && self.eps(body, s)?.acc
            }
            Node::WithInside(_, body) => self.nullable(body, s)?,
        };
        self.nullable_cache.insert((node, s), v);
        Ok(v)
    }

    fn with_parts(&self, w: CmdId) -> (Option<PredId>, CmdId) {
        match self.cmd(w) {
            CmdNode::With { guard, body, .. } => (*guard, *body),
            _ => unreachable!("WithBefore refers to a With command"),
        }
    }

    fn with_resource(&self, w: CmdId) -> usize {
        match self.cmd(w) {
            CmdNode::With { resource, .. } => *resource,
            _ => unreachable!(),
        }
    }

    /// A step admissible in the stutter regions around a `with` body:
    /// program stutter or any environment step.
    fn with_region_step(kind: StepKind, pre: StateId, post: StateId) -> bool {
        kind == StepKind::Env || pre == post
    }

    /// Steps one node, returning the interned successor set plus abort flag.
    pub fn step_node(
        &mut self,
        node: NodeId,
        kind: StepKind,
        pre: StateId,
        post: StateId,
    ) -> Result<(CfgId, bool), SemError> {
        let key = (node, step_key(kind, pre, post));
        if let Some(&r) = self.node_step_cache.get(&key) {
            return Ok(r);
        }
        let alt = self.step_node_inner(node, kind, pre, post)?;
        let cfg = self.intern_cfg(alt.nodes);
        self.node_step_cache.insert(key, (cfg, alt.abort));
        Ok((cfg, alt.abort))
    }

    fn step_node_inner(
        &mut self,
        node: NodeId,
        kind: StepKind,
        pre: StateId,
        post: StateId,
    ) -> Result<Alt, SemError> {
        let out = match self.node(node).clone() {
            Node::Rely(r) => {
                if kind == StepKind::Env && !self.eval_rel_id(r, pre, post)? {
                    Alt {
                        nodes: Vec::new(),
                        abort: true,
                    }
                } else {
                    Alt {
                        nodes: vec![node],
                        abort: false,
                    }
                }
            }
            Node::Guar(g) => {
                if kind == StepKind::Pgm && !self.eval_rel_id(g, pre, post)? {
                    Alt::default()
                } else {
                    Alt {
                        nodes: vec![node],
                        abort: false,
                    }
                }
            }
            Node::Spec { frame, moved, .. } => {
                if kind == StepKind::Env {
                    Alt {
                        nodes: vec![node],
                        abort: false,
                    }
                } else if pre == post {
                    Alt {
                        nodes: vec![node],
                        abort: false,
                    }
                } else if !moved && self.diff_mask(pre, post) & !frame == 0 {
                    let n = match self.node(node).clone() {
                        Node::Spec {
                            frame, post: q, init, ..
                        } => self.intern_node(Node::Spec {
                            frame,
                            post: q,
                            init,
                            moved: true,
                        }),
                        _ => unreachable!(),
                    };
                    Alt {
                        nodes: vec![n],
                        abort: false,
                    }
                } else {
                    Alt::default()
                }
            }
            Node::Term => Alt {
                nodes: vec![node],
                abort: false,
            },
            Node::Enc(f) => {
                let formula = self.formula(f).clone();
                let step = Step {
                    kind,
                    pre: self.space.state(pre).clone(),
                    post: self.space.state(post).clone(),
                };
                let next = progress(&formula, self.space.decls(), &step)?;
                if next == TemporalFormula::False {
                    Alt::default()
                } else {
                    let fid = self.intern_formula(&next);
                    Alt {
                        nodes: vec![self.intern_node(Node::Enc(fid))],
                        abort: false,
                    }
                }
            }
            Node::Conj(a, b) => {
                let (ca, aborta) = self.step_node(a, kind, pre, post)?;
                let (cb, abortb) = self.step_node(b, kind, pre, post)?;
                let left = self.cfg(ca).to_vec();
                let right = self.cfg(cb).to_vec();
                let mut nodes = Vec::with_capacity(left.len() * right.len());
                for &x in &left {
                    for &y in &right {
                        nodes.push(self.intern_node(Node::Conj(x, y)));
                    }
                }
                Alt {
                    nodes,
                    abort: aborta || abortb,
                }
            }
            Node::Seq(a, b) => {
                let (ca, mut abort) = self.step_node(a, kind, pre, post)?;
                let left = self.cfg(ca).to_vec();
                let mut nodes: Vec<NodeId> = left
                    .iter()
                    .map(|&x| self.intern_node(Node::Seq(x, b)))
                    .collect();
                if self.nullable(a, pre)? {
                    let (bs, babort) = self.start(b, pre)?;
                    abort = abort || babort;
                    for &bn in &self.cfg(bs).to_vec() {
                        let (cb, sabort) = self.step_node(bn, kind, pre, post)?;
                        abort = abort || sabort;
                        nodes.extend_from_slice(&self.cfg(cb).to_vec());
                    }
                }
                Alt { nodes, abort }
            }
            Node::Iter(c, seg) => {
                let (cs, mut abort) = self.step_node(seg, kind, pre, post)?;
                let stepped = self.cfg(cs).to_vec();
                let mut nodes: Vec<NodeId> = stepped
                    .iter()
                    .map(|&x| self.intern_node(Node::Iter(c, x)))
                    .collect();
                if self.nullable(seg, pre)? {
                    let (fresh, fabort) = self.start(c, pre)?;
                    abort = abort || fabort;
                    for &cn in &self.cfg(fresh).to_vec() {
                        let (cc, sabort) = self.step_node(cn, kind, pre, post)?;
                        abort = abort || sabort;
                        for &y in &self.cfg(cc).to_vec() {
                            nodes.push(self.intern_node(Node::Iter(c, y)));
                        }
                    }
                }
                Alt { nodes, abort }
            }
            Node::WithBefore(w) => {
                let (guard, body) = self.with_parts(w);
                let resource = self.with_resource(w);
                let mut nodes = Vec::new();
                let mut abort = false;
                if Self::with_region_step(kind, pre, post) {
                    nodes.push(node);
                }
                let guard_ok = match guard {
                    None => true,
                    Some(p) => self.eval_pred_id(p, pre)?,
                };
                if guard_ok {
                    // Commit to the body at the current position; this step
                    // is the body's first step.
                    let (bs, babort) = self.start(body, pre)?;
                    abort = abort || babort;
                    if !(kind == StepKind::Env && self.resource_changed(resource, pre, post)) {
                        for &bn in &self.cfg(bs).to_vec() {
                            let (cb, sabort) = self.step_node(bn, kind, pre, post)?;
                            abort = abort || sabort;
                            for &y in &self.cfg(cb).to_vec() {
                                nodes.push(self.intern_node(Node::WithInside(w, y)));
                            }
                        }
                    }
                    // Commit with an empty body and move straight to the
                    // after-region.
                    if self.eps(body, pre)?.acc && Self::with_region_step(kind, pre, post) {
                        nodes.push(self.intern_node(Node::WithAfter));
                    }
                }
                Alt { nodes, abort }
            }
            Node::WithInside(w, body) => {
                let resource = self.with_resource(w);
                if kind == StepKind::Env && self.resource_changed(resource, pre, post) {
                    Alt::default()
                } else {
                    let (cb, abort) = self.step_node(body, kind, pre, post)?;
                    let inner = self.cfg(cb).to_vec();
                    let mut nodes: Vec<NodeId> = inner
                        .iter()
                        .map(|&x| self.intern_node(Node::WithInside(w, x)))
                        .collect();
                    if self.nullable(body, pre)? && Self::with_region_step(kind, pre, post) {
                        nodes.push(self.intern_node(Node::WithAfter));
                    }
                    Alt { nodes, abort }
                }
            }
            Node::WithAfter => {
                if Self::with_region_step(kind, pre, post) {
                    Alt {
                        nodes: vec![node],
                        abort: false,
                    }
                } else {
                    Alt::default()
                }
            }
            Node::EnvWait(r) => {
                let mut nodes = Vec::new();
                if pre == post {
                    nodes.push(node);
                }
                if kind == StepKind::Env && self.eval_rel_id(r, pre, post)? {
                    nodes.push(self.intern_node(Node::EnvDone));
                }
                Alt {
                    nodes,
                    abort: false,
                }
            }
            Node::EnvDone => {
                if pre == post {
                    Alt {
                        nodes: vec![node],
                        abort: false,
                    }
                } else {
                    Alt::default()
                }
            }
        };
        Ok(out)
    }

    /// Steps a whole config.
    pub fn step_cfg(
        &mut self,
        cfg: CfgId,
        kind: StepKind,
        pre: StateId,
        post: StateId,
    ) -> Result<(CfgId, bool), SemError> {
        let key = (cfg, step_key(kind, pre, post));
        if let Some(&r) = self.cfg_step_cache.get(&key) {
            return Ok(r);
        }
        let nodes = self.cfg(cfg).to_vec();
        let mut out = Vec::new();
        let mut abort = false;
        for n in nodes {
            let (c, a) = self.step_node(n, kind, pre, post)?;
            abort = abort || a;
            out.extend_from_slice(&self.cfg(c).to_vec());
        }
        let result = (self.intern_cfg(out), abort);
        self.cfg_step_cache.insert(key, result);
        Ok(result)
    }

    pub fn cfg_nullable(&mut self, cfg: CfgId, s: StateId) -> Result<bool, SemError> {
        if let Some(&v) = self.cfg_nullable_cache.get(&(cfg, s)) {
            return Ok(v);
        }
        let nodes = self.cfg(cfg).to_vec();
        let mut v = false;
        for n in nodes {
            if self.nullable(n, s)? {
                v = true;
                break;
            }
        }
        self.cfg_nullable_cache.insert((cfg, s), v);
        Ok(v)
    }

    pub fn state_id(&self, state: &State, pos: usize) -> Result<StateId, SemError> {
        self.space
            .id_of(state)
            .ok_or(SemError::StateOutsideSpace(pos))
    }
}
