//! Unit tests for the trace matcher.

use super::*;
use crate::kernel::{
    Binding, Command, Decls, Frame, SeqVal, StatePredicate, StateRelation, TemporalFormula,
    Value, VarDecl,
};
use crate::traces::{Step, StepKind, Trace};

fn v(n: i64) -> Value {
    Value::Int(n)
}

fn queue_space() -> StateSpace {
    StateSpace::new(Decls::new(vec![
        VarDecl::seq("qu", vec![v(1), v(2)], 2),
        VarDecl::scalar("v", vec![v(2)]),
        VarDecl::scalar("res", vec![Value::Null, v(1), v(2)]),
    ]))
    .unwrap()
}

fn qstate(qu: Vec<Value>, res: Value) -> crate::kernel::State {
    crate::kernel::State {
        bindings: vec![
            Binding::Seq(SeqVal(qu)),
            Binding::Scalar(v(2)),
            Binding::Scalar(res),
        ],
    }
}

fn pgm(pre: crate::kernel::State, post: crate::kernel::State) -> Step {
    Step {
        kind: StepKind::Pgm,
        pre,
        post,
    }
}

fn env(pre: crate::kernel::State, post: crate::kernel::State) -> Step {
    Step {
        kind: StepKind::Env,
        pre,
        post,
    }
}

fn append_spec() -> Command {
    Command::spec(Frame::of(&["qu"]), StateRelation::append_var("qu", "v"))
}

#[test]
fn guar_accepts_single_extending_pgm_step() {
    let space = queue_space();
    let t = Trace::finite(
        qstate(vec![], Value::Null),
        vec![pgm(qstate(vec![], Value::Null), qstate(vec![v(2)], Value::Null))],
    );
    let verdict = accepts(&Command::guar(StateRelation::prefix_of("qu")), &t, &space).unwrap();
    assert_eq!(verdict, Verdict::AcceptedTerminated);
}

#[test]
fn rely_conj_spec_aborts_on_first_violating_env_step() {
    let space = queue_space();
    let cmd = Command::conj(
        Command::rely(StateRelation::suffix_of("qu")),
        append_spec(),
    );
    let t = Trace::finite(
        qstate(vec![v(1)], Value::Null),
        vec![env(
            qstate(vec![v(1)], Value::Null),
            qstate(vec![v(1), v(2)], Value::Null),
        )],
    );
    assert_eq!(accepts(&cmd, &t, &space).unwrap(), Verdict::AbortedAt(0));
}

#[test]
fn spec_accepts_single_step_satisfying_post() {
    let space = queue_space();
    let t = Trace::finite(
        qstate(vec![], Value::Null),
        vec![pgm(qstate(vec![], Value::Null), qstate(vec![v(2)], Value::Null))],
    );
    assert_eq!(
        accepts(&append_spec(), &t, &space).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn spec_rejects_second_effectful_step_and_nonframe_changes() {
    let space = queue_space();
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(1)], Value::Null);
    let s2 = qstate(vec![v(2)], Value::Null);
    // two state-changing pgm steps cannot be one atomic effect
    let t = Trace::finite(s0.clone(), vec![pgm(s0.clone(), s1.clone()), pgm(s1.clone(), s2)]);
    assert!(matches!(
        accepts(&append_spec(), &t, &space).unwrap(),
        Verdict::Rejected { .. }
    ));
    // a pgm step off the frame is rejected
    let off = qstate(vec![], v(1));
    let t2 = Trace::finite(s0.clone(), vec![pgm(s0, off)]);
    assert!(matches!(
        accepts(&append_spec(), &t2, &space).unwrap(),
        Verdict::Rejected { at: 0, .. }
    ));
}

#[test]
fn term_rejects_every_lasso_and_accepts_any_finite_trace() {
    let space = queue_space();
    let s0 = qstate(vec![], Value::Null);
    let stutter = Trace::lasso(s0.clone(), vec![pgm(s0.clone(), s0.clone())], 0);
    assert!(matches!(
        accepts(&Command::Term, &stutter, &space).unwrap(),
        Verdict::Rejected { .. }
    ));
    let wild = Trace::finite(
        s0.clone(),
        vec![
            pgm(s0.clone(), qstate(vec![v(1)], v(1))),
            env(qstate(vec![v(1)], v(1)), s0.clone()),
        ],
    );
    assert_eq!(
        accepts(&Command::Term, &wild, &space).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn with_rejects_env_change_to_resource_between_body_steps() {
    let space = queue_space();
    let cmd = Command::with("qu", append_spec());
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(2)], Value::Null);
    let s0b = qstate(vec![], Value::Null);
    let s1b = qstate(vec![v(2)], Value::Null);
    // commit (append), env clears qu, then another pgm change: nothing can
    // absorb the final step.
    let t = Trace::finite(
        s0.clone(),
        vec![
            pgm(s0, s1.clone()),
            env(s1, s0b.clone()),
            pgm(s0b, s1b),
        ],
    );
    assert!(matches!(
        accepts(&cmd, &t, &space).unwrap(),
        Verdict::Rejected { .. }
    ));
}

#[test]
fn with_allows_env_steps_off_the_resource_during_body() {
    let space = queue_space();
    let cmd = Command::with("qu", append_spec());
    let s0 = qstate(vec![], Value::Null);
    let s0r = qstate(vec![], v(1)); // env writes res mid-window
    let s1 = qstate(vec![v(2)], v(1));
    let t = Trace::finite(s0.clone(), vec![env(s0, s0r.clone()), pgm(s0r, s1)]);
    assert_eq!(accepts(&cmd, &t, &space).unwrap(), Verdict::AcceptedTerminated);
}

#[test]
fn pre_aborts_from_failing_initial_state() {
    let space = queue_space();
    let cmd = Command::seq(
        Command::pre(StatePredicate::non_empty("qu")),
        Command::with(
            "qu",
            Command::spec(Frame::of(&["qu", "res"]), StateRelation::cons_head("qu", "res")),
        ),
    );
    let s0 = qstate(vec![], Value::Null);
    let t = Trace::finite(s0.clone(), vec![pgm(s0.clone(), s0)]);
    assert_eq!(accepts(&cmd, &t, &space).unwrap(), Verdict::AbortedAt(0));
}

#[test]
fn read_style_spec_pops_head_into_result() {
    let space = queue_space();
    let cmd = Command::seq(
        Command::pre(StatePredicate::non_empty("qu")),
        Command::with(
            "qu",
            Command::spec(Frame::of(&["qu", "res"]), StateRelation::cons_head("qu", "res")),
        ),
    );
    let s0 = qstate(vec![v(1)], Value::Null);
    let s1 = qstate(vec![], v(1));
    let t = Trace::finite(s0.clone(), vec![pgm(s0, s1)]);
    assert_eq!(accepts(&cmd, &t, &space).unwrap(), Verdict::AcceptedTerminated);
}

#[test]
fn iter_env_atomic_accepts_lasso_of_env_changes() {
    // fail^omega ; success on a lasso whose cycle is an env step changing
    // the variable accepts infinitely (the retry loop spins forever).
    let space = queue_space();
    let fail = Command::env_atomic(StateRelation::neq_primed("qu"));
    let success = Command::conj(
        Command::with("qu", append_spec()),
        Command::Term,
    );
    let cmd = Command::seq(Command::iter_omega(fail), success);
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(1)], Value::Null);
    let t = Trace::lasso(
        s0.clone(),
        vec![env(s0.clone(), s1.clone()), env(s1, s0)],
        0,
    );
    assert_eq!(accepts(&cmd, &t, &space).unwrap(), Verdict::AcceptedInfinite);
}

#[test]
fn env_atomic_becomes_infeasible_without_env_change() {
    // With no env step changing qu, the iteration is forced to exit and the
    // successful body must run: an all-stutter finite trace is rejected
    // (nothing appended), an append step is accepted.
    let space = queue_space();
    let fail = Command::env_atomic(StateRelation::neq_primed("qu"));
    let success = Command::conj(Command::with("qu", append_spec()), Command::Term);
    let cmd = Command::seq(Command::iter_omega(fail), success);
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(2)], Value::Null);
    let ok = Trace::finite(s0.clone(), vec![pgm(s0.clone(), s1)]);
    assert_eq!(accepts(&cmd, &ok, &space).unwrap(), Verdict::AcceptedTerminated);
    let idle = Trace::finite(s0.clone(), vec![pgm(s0.clone(), s0)]);
    assert!(matches!(
        accepts(&cmd, &idle, &space).unwrap(),
        Verdict::Rejected { .. }
    ));
}

#[test]
fn encode_accepts_exactly_matching_traces() {
    let space = queue_space();
    let f = TemporalFormula::eventually(TemporalFormula::atom(StatePredicate::non_empty("qu")));
    let cmd = Command::Encode(f);
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(1)], Value::Null);
    let hit = Trace::finite(s0.clone(), vec![env(s0.clone(), s1)]);
    assert_eq!(accepts(&cmd, &hit, &space).unwrap(), Verdict::AcceptedTerminated);
    let miss = Trace::finite(s0.clone(), vec![env(s0.clone(), s0)]);
    assert!(matches!(
        accepts(&cmd, &miss, &space).unwrap(),
        Verdict::Rejected { .. }
    ));
}

#[test]
fn await_with_blocks_forever_only_when_guard_not_eventually_stable() {
    let space = queue_space();
    let body = Command::seq(
        Command::pre(StatePredicate::non_empty("qu")),
        Command::spec(Frame::of(&["qu", "res"]), StateRelation::cons_head("qu", "res")),
    );
    let cmd = Command::await_with("qu", StatePredicate::non_empty("qu"), body);

    // all-empty stutter lasso: guard never true, blocking forever accepted
    let s0 = qstate(vec![], Value::Null);
    let blocked = Trace::lasso(s0.clone(), vec![env(s0.clone(), s0.clone())], 0);
    assert_eq!(accepts(&cmd, &blocked, &space).unwrap(), Verdict::AcceptedInfinite);

    // guard becomes and stays true: weak fairness forbids perpetual waiting
    let s1 = qstate(vec![v(1)], Value::Null);
    let enabled = Trace::lasso(
        s0.clone(),
        vec![env(s0.clone(), s1.clone()), env(s1.clone(), s1.clone())],
        1,
    );
    assert!(matches!(
        accepts(&cmd, &enabled, &space).unwrap(),
        Verdict::Rejected { .. }
    ));
}

#[test]
fn partial_accepts_examples() {
    let space = queue_space();
    let read = Command::conj(
        Command::rely(StateRelation::prefix_of("qu")),
        Command::conj(
            Command::guar(StateRelation::suffix_of("qu")),
            Command::with(
                "qu",
                Command::spec(Frame::of(&["qu", "res"]), StateRelation::cons_head("qu", "res")),
            ),
        ),
    );

    // all-env-stutter prefix with qu=[] throughout is a prefix of a
    // behaviour in which the queue is later filled
    let s0 = qstate(vec![], Value::Null);
    let idle = Trace::finite(
        s0.clone(),
        vec![env(s0.clone(), s0.clone()), env(s0.clone(), s0.clone())],
    );
    assert!(partial_accepts(&read, &idle, &space).unwrap());

    // a pgm step that grows the queue violates read's guarantee: no
    // accepted behaviour extends it
    let s1 = qstate(vec![v(1)], Value::Null);
    let grow = Trace::finite(s0.clone(), vec![pgm(s0.clone(), s1)]);
    assert!(!partial_accepts(&read, &grow, &space).unwrap());

    // the empty trace from a pre-satisfying state prefixes anything
    let empty = Trace::finite(s0, vec![]);
    assert!(partial_accepts(&read, &empty, &space).unwrap());
}

#[test]
fn prefix_closure_of_accepted_traces() {
    let space = queue_space();
    let cmd = Command::conj(
        Command::rely(StateRelation::suffix_of("qu")),
        Command::conj(
            Command::guar(StateRelation::prefix_of("qu")),
            Command::with("qu", append_spec()),
        ),
    );
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(2)], Value::Null);
    let t = Trace::finite(
        s0.clone(),
        vec![
            pgm(s0.clone(), s0.clone()),
            pgm(s0.clone(), s1.clone()),
            env(s1.clone(), s1.clone()),
        ],
    );
    assert!(accepts(&cmd, &t, &space).unwrap().is_accepted());
    for n in 0..=t.len() {
        assert!(partial_accepts(&cmd, &t.prefix(n), &space).unwrap());
    }
}

#[test]
fn abort_dominance_over_later_divergence() {
    // If a trace aborts at i, traces agreeing up to i are never rejected at
    // a later index.
    let space = queue_space();
    let cmd = Command::conj(
        Command::rely(StateRelation::suffix_of("qu")),
        Command::conj(
            Command::guar(StateRelation::prefix_of("qu")),
            Command::with("qu", append_spec()),
        ),
    );
    let s0 = qstate(vec![v(1)], Value::Null);
    let bad = qstate(vec![v(1), v(2)], Value::Null);
    let t = Trace::finite(s0.clone(), vec![env(s0.clone(), bad.clone())]);
    assert_eq!(accepts(&cmd, &t, &space).unwrap(), Verdict::AbortedAt(0));
    // extend arbitrarily: still aborted at 0 (or accepted), never rejected
    let t2 = Trace::finite(
        s0.clone(),
        vec![
            env(s0, bad.clone()),
            pgm(bad.clone(), qstate(vec![], v(1))),
        ],
    );
    assert!(accepts(&cmd, &t2, &space).unwrap().is_accepted_or_aborted());
}

#[test]
fn explain_points_at_failing_conjunct() {
    let space = queue_space();
    let cmd = Command::conj(
        Command::rely(StateRelation::prefix_of("qu")),
        Command::conj(
            Command::guar(StateRelation::suffix_of("qu")),
            Command::with(
                "qu",
                Command::spec(Frame::of(&["qu", "res"]), StateRelation::cons_head("qu", "res")),
            ),
        ),
    );
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(1)], Value::Null);
    let grow = Trace::finite(s0.clone(), vec![pgm(s0, s1)]);
    // the guarantee conjunct is the failing one
    assert_eq!(explain(&cmd, &grow, &space).unwrap(), "root.1.0");
}

#[test]
fn verdict_determinism() {
    let space = queue_space();
    let cmd = Command::conj(
        Command::rely(StateRelation::suffix_of("qu")),
        Command::with("qu", append_spec()),
    );
    let s0 = qstate(vec![], Value::Null);
    let s1 = qstate(vec![v(2)], Value::Null);
    let t = Trace::finite(s0.clone(), vec![pgm(s0, s1)]);
    let first = accepts(&cmd, &t, &space).unwrap();
    for _ in 0..5 {
        assert_eq!(accepts(&cmd, &t, &space).unwrap(), first);
    }
}
