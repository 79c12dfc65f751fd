//! The queue and stack case studies: spec builders on concrete traces,
//! exploration counts, projections, and conformance invariants.

use rgcheck::casestudies::*;
use rgcheck::kernel::{eval_rel, Binding, SeqVal, StateRelation, Value};
use rgcheck::semantics::{accepts, Verdict};
use rgcheck::traces::{Step, StepKind, Trace};
use rgcheck::{State, StateSpace};

fn v(n: i64) -> Value {
    Value::Int(n)
}

fn qstate(space_vals: &(Vec<Value>, Value, Option<Value>)) -> State {
    let (qu, param, res) = space_vals;
    let mut bindings = vec![Binding::Seq(SeqVal(qu.clone())), Binding::Scalar(*param)];
    if let Some(r) = res {
        bindings.push(Binding::Scalar(*r));
    }
    State { bindings }
}

fn pgm(pre: State, post: State) -> Step {
    Step {
        kind: StepKind::Pgm,
        pre,
        post,
    }
}

fn env(pre: State, post: State) -> Step {
    Step {
        kind: StepKind::Env,
        pre,
        post,
    }
}

#[test]
fn fig1_write_examples() {
    let decls = queue_decls(&[Value::Null, v(1), v(2)], 2, v(2), false);
    let space = StateSpace::new(decls).unwrap();
    let specs = queue_spec_srsw();
    let s0 = qstate(&(vec![], v(2), None));
    let s1 = qstate(&(vec![v(2)], v(2), None));
    let t = Trace::finite(s0.clone(), vec![pgm(s0, s1)]);
    assert_eq!(
        accepts(&specs.write, &t, &space).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn fig1_read_examples() {
    let decls = queue_decls(&[Value::Null, v(1), v(2)], 2, v(2), true);
    let space = StateSpace::new(decls).unwrap();
    let specs = queue_spec_srsw();

    // read from empty aborts on its precondition
    let empty = qstate(&(vec![], v(2), Some(Value::Null)));
    let idle = Trace::finite(empty.clone(), vec![pgm(empty.clone(), empty.clone())]);
    assert_eq!(accepts(&specs.read, &idle, &space).unwrap(), Verdict::AbortedAt(0));

    // read from [1] pops into res
    let full = qstate(&(vec![v(1)], v(2), Some(Value::Null)));
    let done = qstate(&(vec![], v(2), Some(v(1))));
    let t = Trace::finite(full.clone(), vec![pgm(full, done)]);
    assert_eq!(
        accepts(&specs.read, &t, &space).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn fig2_write_blocks_forever_when_full() {
    // N = 1, queue stays full: the await blocks forever on an all-stutter
    // lasso.
    let decls = queue_decls(&[Value::Null, v(1), v(2)], 1, v(1), false);
    let space = StateSpace::new(decls).unwrap();
    let specs = bounded_queue_await_spec(1).unwrap();
    let full = qstate(&(vec![v(2)], v(1), None));
    let lasso = Trace::lasso(full.clone(), vec![pgm(full.clone(), full.clone())], 0);
    assert_eq!(
        accepts(&specs.write, &lasso, &space).unwrap(),
        Verdict::AcceptedInfinite
    );

    // an env step later makes room: a terminating decomposition exists
    let empty = qstate(&(vec![], v(1), None));
    let one = qstate(&(vec![v(1)], v(1), None));
    let t = Trace::finite(
        full.clone(),
        vec![
            pgm(full.clone(), full.clone()),
            env(full, empty.clone()),
            pgm(empty, one),
        ],
    );
    assert_eq!(
        accepts(&specs.write, &t, &space).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn fig2_read_behaves_like_fig1_when_enabled() {
    let decls = queue_decls(&[Value::Null, v(1), v(2)], 1, v(1), true);
    let space = StateSpace::new(decls).unwrap();
    let specs = bounded_queue_await_spec(1).unwrap();
    let full = qstate(&(vec![v(1)], v(1), Some(Value::Null)));
    let done = qstate(&(vec![], v(1), Some(v(1))));
    let t = Trace::finite(full.clone(), vec![pgm(full, done)]);
    assert_eq!(
        accepts(&specs.read, &t, &space).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn fig3_read_termination_behaviour() {
    let decls = queue_decls(&[Value::Null, v(1)], 1, v(1), true);
    let space = StateSpace::new(decls).unwrap();
    let specs = bounded_queue_terminate_spec(1).unwrap();

    // on an all-empty lasso termination is not required
    let empty = qstate(&(vec![], v(1), Some(Value::Null)));
    let idle = Trace::lasso(empty.clone(), vec![env(empty.clone(), empty.clone())], 0);
    assert_eq!(
        accepts(&specs.read, &idle, &space).unwrap(),
        Verdict::AcceptedInfinite
    );

    // on a lasso where the queue is eventually non-empty forever, the read
    // must terminate: perpetual stuttering is rejected
    let full = qstate(&(vec![v(1)], v(1), Some(Value::Null)));
    let fed = Trace::lasso(
        empty.clone(),
        vec![env(empty, full.clone()), env(full.clone(), full.clone())],
        1,
    );
    assert!(matches!(
        accepts(&specs.read, &fed, &space).unwrap(),
        Verdict::Rejected { .. }
    ));

    // single-step write at capacity
    let decls_w = queue_decls(&[Value::Null, v(1), v(2)], 2, v(2), false);
    let space_w = StateSpace::new(decls_w).unwrap();
    let w = bounded_queue_terminate_spec(2).unwrap();
    let s0 = qstate(&(vec![], v(2), None));
    let s1 = qstate(&(vec![v(2)], v(2), None));
    let t = Trace::finite(s0.clone(), vec![pgm(s0, s1)]);
    assert_eq!(
        accepts(&w.write, &t, &space_w).unwrap(),
        Verdict::AcceptedTerminated
    );
}

#[test]
fn fig4_stack_examples() {
    let specs = stack_explicit_spec();

    // pop from the empty stack returns null and terminates
    let decls = stack_decls(&[v(1)], 1, v(1), true);
    let space = StateSpace::new(decls).unwrap();
    let empty_null = State {
        bindings: vec![
            Binding::Seq(SeqVal::empty()),
            Binding::Scalar(v(1)),
            Binding::Scalar(Value::Null),
        ],
    };
    let t = Trace::finite(empty_null.clone(), vec![pgm(empty_null.clone(), empty_null.clone())]);
    assert_eq!(
        accepts(&specs.read, &t, &space).unwrap(),
        Verdict::AcceptedTerminated
    );

    // push(null) aborts on its precondition
    let decls_null = stack_decls(&[v(1)], 1, Value::Null, false);
    let space_null = StateSpace::new(decls_null).unwrap();
    let s0 = State {
        bindings: vec![Binding::Seq(SeqVal::empty()), Binding::Scalar(Value::Null)],
    };
    let t = Trace::finite(s0.clone(), vec![pgm(s0.clone(), s0)]);
    assert_eq!(accepts(&specs.write, &t, &space_null).unwrap(), Verdict::AbortedAt(0));

    // push(1) under perpetual interference spins forever
    let decls_p = stack_decls(&[v(1)], 1, v(1), false);
    let space_p = StateSpace::new(decls_p).unwrap();
    let e = State {
        bindings: vec![Binding::Seq(SeqVal::empty()), Binding::Scalar(v(1))],
    };
    let f = State {
        bindings: vec![Binding::Seq(SeqVal(vec![v(1)])), Binding::Scalar(v(1))],
    };
    let churn = Trace::lasso(
        e.clone(),
        vec![env(e.clone(), f.clone()), env(f, e.clone())],
        0,
    );
    assert_eq!(
        accepts(&specs.write, &churn, &space_p).unwrap(),
        Verdict::AcceptedInfinite
    );
}

#[test]
fn fig5_stack_examples() {
    let specs = stack_terminate_spec();
    let decls = stack_decls(&[v(1)], 2, v(1), false);
    let space = StateSpace::new(decls).unwrap();
    let e = State {
        bindings: vec![Binding::Seq(SeqVal::empty()), Binding::Scalar(v(1))],
    };
    let f = State {
        bindings: vec![Binding::Seq(SeqVal(vec![v(1)])), Binding::Scalar(v(1))],
    };

    // environment quiesces: perpetual stuttering is rejected (push must
    // terminate)
    let quiesced = Trace::lasso(
        e.clone(),
        vec![env(e.clone(), f.clone()), env(f.clone(), f.clone())],
        1,
    );
    assert!(matches!(
        accepts(&specs.write, &quiesced, &space).unwrap(),
        Verdict::Rejected { .. }
    ));

    // environment churns forever: spinning is allowed...
    let churn = Trace::lasso(
        e.clone(),
        vec![env(e.clone(), f.clone()), env(f.clone(), e.clone())],
        0,
    );
    assert_eq!(
        accepts(&specs.write, &churn, &space).unwrap(),
        Verdict::AcceptedInfinite
    );
    // ...and so is terminating with the push committed
    let pushed = Trace::finite(e.clone(), vec![pgm(e.clone(), f.clone())]);
    assert_eq!(
        accepts(&specs.write, &pushed, &space).unwrap(),
        Verdict::AcceptedTerminated
    );

    // sequential push then pop returns the pushed value
    let decls_r = stack_decls(&[v(1)], 2, v(1), true);
    let space_r = StateSpace::new(decls_r).unwrap();
    let st = |s: Vec<Value>, r: Value| State {
        bindings: vec![Binding::Seq(SeqVal(s)), Binding::Scalar(v(1)), Binding::Scalar(r)],
    };
    let t = Trace::finite(
        st(vec![v(1)], Value::Null),
        vec![pgm(st(vec![v(1)], Value::Null), st(vec![], v(1)))],
    );
    assert_eq!(
        accepts(&specs.read, &t, &space_r).unwrap(),
        Verdict::AcceptedTerminated
    );
}

/// A system of independent straight-line threads, each instruction setting
/// that thread's own counter so no configuration ever repeats.
fn independent_threads(instrs_per_thread: &[usize]) -> Lts {
    use rgcheck::kernel::{Decls, StatePredicate, VarDecl, VarName};
    let mut vars = Vec::new();
    let mut progs = Vec::new();
    for (t, &n) in instrs_per_thread.iter().enumerate() {
        let var = format!("c{t}");
        vars.push(VarDecl::scalar(var.clone(), (0..=n as i64).map(v).collect()));
        let mut prog = ThreadProgram::default();
        for i in 0..n {
            prog.instrs.push(vec![Instr {
                label: format!("t{t}:i{i}"),
                guard: Guard::Pred(StatePredicate::True),
                updates: vec![(VarName::new(var.clone()), Update::SetScalar(v(i as i64 + 1)))],
                next: i + 1,
            }]);
        }
        progs.push(prog);
    }
    let decls = Decls::new(vars.clone());
    let init = State {
        bindings: vars.iter().map(|_| Binding::Scalar(v(0))).collect(),
    };
    Lts {
        decls,
        init,
        threads: progs,
        data_var: rgcheck::kernel::VarName::new("c0"),
        invariant: None,
    }
}

#[test]
fn explorer_interleaving_counts() {
    // Two independent single-instruction threads: exactly 2 interleavings.
    let lts = independent_threads(&[1, 1]);
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    assert_eq!(runs.len(), 2);

    // 2 threads x 2 instructions: the multinomial 4!/(2!*2!) = 6.
    let lts = independent_threads(&[2, 2]);
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    assert_eq!(runs.len(), 6);

    // pushes racing a pop: somebody's CAS fails at least once in some
    // interleaving (a retry occurs)
    let threads = vec![
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Push, Some(v(2)))],
        vec![(OpKind::Pop, None)],
    ];
    let lts = treiber_impl(&threads, &[v(1), v(2)], 3).unwrap();
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    assert!(runs
        .iter()
        .any(|r| r.steps.iter().any(|s| s.label.contains("pop:cas-fail"))));
    assert!(runs
        .iter()
        .any(|r| r.steps.iter().any(|s| s.label.contains("push:cas-fail"))));
}

#[test]
fn projection_partitions_steps_between_pgm_and_env() {
    // Each system step is a program step in exactly one thread's viewpoint
    // and an environment step in every other thread's.
    let threads = vec![
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Push, Some(v(2)))],
        vec![(OpKind::Pop, None)],
    ];
    let lts = treiber_impl(&threads, &[v(1), v(2)], 3).unwrap();
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    for run in &runs {
        for step in &run.steps {
            let pgm_views = (0..lts.threads.len())
                .filter(|&t| step.thread == t)
                .count();
            assert_eq!(pgm_views, 1);
        }
    }
    // and within a projected window the pgm steps are exactly the window
    // owner's: every pgm step of a pop window writes res or is a stutter of
    // everything visible, never another thread's stack update
    for (ri, run) in runs.iter().enumerate().take(40) {
        for w in window_projections(&lts, run, ri).unwrap() {
            if w.kind != OpKind::Pop {
                continue;
            }
            for step in &w.trace.steps {
                if step.kind == StepKind::Pgm {
                    let res = rgcheck::kernel::VarName::new("res");
                    let s_pre = step.pre.get(&w.decls, &res).unwrap();
                    let s_post = step.post.get(&w.decls, &res).unwrap();
                    let stack_changed = step.pre.bindings[0] != step.post.bindings[0];
                    // a pop's own step either stutters, or commits (stack and
                    // res both move), or sets res on the empty stack
                    if stack_changed {
                        assert_ne!(s_pre, s_post, "commit writes the result");
                    }
                }
            }
        }
    }
}

#[test]
fn srsw_viewpoints_validate_the_fig1_relies_and_guars() {
    // In the single-reader single-writer system, every env step of the
    // writer's viewpoint satisfies the writer's rely, and every pgm step
    // satisfies its guarantee (and dually for the reader). The Fig. 1
    // relies are validated, not assumed.
    let threads = vec![
        vec![(OpKind::Write, Some(v(1))), (OpKind::Write, Some(v(2)))],
        vec![(OpKind::Read, None), (OpKind::Read, None)],
    ];
    let lts = lock_queue_impl(2, &threads, &[v(1), v(2)], 3).unwrap();
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    let suffixof = StateRelation::suffix_of("qu");
    let prefixof = StateRelation::prefix_of("qu");
    let decls = rgcheck::kernel::Decls::new(vec![rgcheck::kernel::VarDecl::seq(
        "qu",
        vec![v(1), v(2)],
        3,
    )]);
    let mut env_steps_seen = 0;
    for run in &runs {
        let writer = thread_viewpoint(&lts, run, 0).unwrap();
        for step in &writer.steps {
            match step.kind {
                StepKind::Env => {
                    env_steps_seen += 1;
                    assert!(eval_rel(&suffixof, &decls, &step.pre, &step.post).unwrap());
                }
                StepKind::Pgm => {
                    assert!(eval_rel(&prefixof, &decls, &step.pre, &step.post).unwrap());
                }
            }
        }
        let reader = thread_viewpoint(&lts, run, 1).unwrap();
        for step in &reader.steps {
            match step.kind {
                StepKind::Env => {
                    env_steps_seen += 1;
                    assert!(eval_rel(&prefixof, &decls, &step.pre, &step.post).unwrap());
                }
                StepKind::Pgm => {
                    assert!(eval_rel(&suffixof, &decls, &step.pre, &step.post).unwrap());
                }
            }
        }
    }
    assert!(env_steps_seen > 0);
}

#[test]
fn treiber_stack_changes_only_at_commit_labels() {
    let threads = vec![
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Push, Some(v(2)))],
        vec![(OpKind::Pop, None)],
    ];
    let lts = treiber_impl(&threads, &[v(1), v(2)], 3).unwrap();
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    let s = rgcheck::kernel::VarName::new("s");
    for run in &runs {
        for step in &run.steps {
            let changed = step.pre.get(&lts.decls, &s).unwrap() != step.post.get(&lts.decls, &s).unwrap();
            if changed {
                assert!(
                    step.label.contains("cas-commit"),
                    "s changed by non-commit step {}",
                    step.label
                );
            }
        }
    }
}

#[test]
fn empty_thread_list_yields_initial_state_only() {
    let lts = lock_queue_impl(2, &[], &[v(1)], 2).unwrap();
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    assert_eq!(runs.len(), 1);
    assert!(runs[0].steps.is_empty());
    assert_eq!(runs[0].final_state, lts.init);
}

#[test]
fn blocked_write_reports_non_progressing_cycle() {
    // Writer with two writes into an N=1 queue and no reader: the second
    // write spins; the explorer reports a lasso.
    let threads = vec![vec![
        (OpKind::Write, Some(v(1))),
        (OpKind::Write, Some(v(1))),
    ]];
    let lts = lock_queue_impl(1, &threads, &[v(1)], 2).unwrap();
    let runs = explore(&lts, &ExploreConfig::default()).unwrap();
    assert!(runs.iter().any(|r| r.loop_start.is_some()));
    // and the blocked window is accepted by the awaiting spec
    let specs = bounded_queue_await_spec(1).unwrap();
    let spec_of = move |w: &OpWindow| match w.kind {
        OpKind::Write => specs.write.clone(),
        _ => specs.read.clone(),
    };
    let out = conformance(&lts, &runs, &spec_of).unwrap();
    assert!(out.passed(), "{:?}", out.failure);
}

#[test]
fn scale_limits_are_enforced() {
    let too_many_threads = vec![
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Push, Some(v(1)))],
    ];
    assert!(treiber_impl(&too_many_threads, &[v(1)], 2).is_err());
    let too_many_ops = vec![vec![
        (OpKind::Push, Some(v(1))),
        (OpKind::Push, Some(v(1))),
        (OpKind::Push, Some(v(1))),
    ]];
    assert!(treiber_impl(&too_many_ops, &[v(1)], 3).is_err());
    assert!(lock_queue_impl(0, &[], &[v(1)], 1).is_err());
    assert!(bounded_queue_await_spec(0).is_err());
}

#[test]
fn explorer_is_deterministic() {
    let threads = vec![
        vec![(OpKind::Push, Some(v(1)))],
        vec![(OpKind::Pop, None)],
    ];
    let lts = treiber_impl(&threads, &[v(1)], 2).unwrap();
    let a = explore(&lts, &ExploreConfig::default()).unwrap();
    let b = explore(&lts, &ExploreConfig::default()).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.final_state, y.final_state);
        assert_eq!(x.loop_start, y.loop_start);
        let lx: Vec<&str> = x.steps.iter().map(|s| s.label.as_str()).collect();
        let ly: Vec<&str> = y.steps.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(lx, ly);
    }
}

#[test]
fn scenario_files_parse_and_build() {
    let text = "\
# two pushers and a popper
model = treiber
values = 1 2
seq_cap = 3
max_len = 24
thread: push 1
thread: push 2
thread: pop
";
    let scenario = parse_scenario(text).unwrap();
    assert_eq!(scenario.threads.len(), 3);
    let lts = scenario.build().unwrap();
    let runs = explore(&lts, &scenario.explore_config()).unwrap();
    assert!(!runs.is_empty());

    assert!(parse_scenario("thread: push 1").is_err(), "missing model");
    assert!(parse_scenario("model = treiber\nthread: shove 1").is_err());
    let err = parse_scenario("model = treiber\nbogus line").unwrap_err();
    assert!(err.to_string().contains("line 2"));
}
