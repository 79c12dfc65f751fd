//! Refinement checker on the paper's small refinement facts.

use rgcheck::kernel::{Command, Decls, Frame, StatePredicate, StateRelation, Value, VarDecl, VarName};
use rgcheck::refinement::{
    check_law_guar_with, check_law_rely_with, check_stability, equivalent, refines, CheckConfig,
    CheckError, CheckStatus,
};
use rgcheck::semantics::accepts;
use rgcheck::StateSpace;

fn v(n: i64) -> Value {
    Value::Int(n)
}

fn qu_decls(cap: usize, value: i64) -> Decls {
    Decls::new(vec![
        VarDecl::seq("qu", vec![Value::Null, v(1), v(2)], cap),
        VarDecl::scalar("v", vec![v(value)]),
    ])
}

fn append_spec() -> Command {
    Command::spec(Frame::of(&["qu"]), StateRelation::append_var("qu", "v"))
}

fn prefix_spec() -> Command {
    Command::spec(Frame::of(&["qu"]), StateRelation::prefix_of("qu"))
}

#[test]
fn refines_is_reflexive() {
    let cfg = CheckConfig::new(qu_decls(1, 1), 3);
    for c in [
        append_spec(),
        Command::with("qu", append_spec()),
        Command::conj(Command::rely(StateRelation::suffix_of("qu")), append_spec()),
    ] {
        assert!(refines(&c, &c, &cfg).unwrap().passed());
    }
}

#[test]
fn weakening_the_postcondition_is_a_refinement() {
    // spec(qu prefixof qu') is refined by spec(qu' = qu ++ [v]).
    let cfg = CheckConfig::new(qu_decls(2, 1), 4);
    assert!(refines(&prefix_spec(), &append_spec(), &cfg).unwrap().passed());
}

#[test]
fn strengthening_direction_yields_replayable_counterexample() {
    let cfg = CheckConfig::new(qu_decls(2, 1), 4);
    let r = refines(&append_spec(), &prefix_spec(), &cfg).unwrap();
    match r.status {
        CheckStatus::Counterexample {
            trace,
            abstract_verdict,
            concrete_verdict,
        } => {
            let space = StateSpace::new(qu_decls(2, 1)).unwrap();
            assert!(concrete_verdict.is_accepted());
            assert!(!abstract_verdict.is_accepted_or_aborted());
            // replay reproduces both verdicts
            assert_eq!(accepts(&append_spec(), &trace, &space).unwrap(), abstract_verdict);
            assert_eq!(accepts(&prefix_spec(), &trace, &space).unwrap(), concrete_verdict);
        }
        other => panic!("expected counterexample, got {other:?}"),
    }
}

#[test]
fn law_rely_with_small() {
    let cfg = CheckConfig::new(qu_decls(1, 1), 4);
    let r = check_law_rely_with(
        &StateRelation::suffix_of("qu"),
        &VarName::new("qu"),
        &append_spec(),
        &cfg,
    )
    .unwrap();
    assert!(r.passed(), "{:?}", r.status);
}

#[test]
fn law_rely_with_universal_rely() {
    let cfg = CheckConfig::new(qu_decls(1, 1), 4);
    let r = check_law_rely_with(
        &StateRelation::Universal,
        &VarName::new("qu"),
        &append_spec(),
        &cfg,
    )
    .unwrap();
    assert!(r.passed());
}

#[test]
fn law_guar_with_small() {
    let cfg = CheckConfig::new(qu_decls(1, 1), 4);
    let r = check_law_guar_with(
        &StateRelation::prefix_of("qu"),
        &StateRelation::Universal,
        &VarName::new("qu"),
        &append_spec(),
        &cfg,
    )
    .unwrap();
    assert!(r.passed(), "{:?}", r.status);
}

#[test]
fn law_guar_with_side_condition() {
    let cfg = CheckConfig::new(qu_decls(1, 1), 3);
    let err = check_law_guar_with(
        &StateRelation::eq_primed("v"), // refers to a non-resource variable
        &StateRelation::Universal,
        &VarName::new("qu"),
        &append_spec(),
        &cfg,
    );
    assert!(matches!(err, Err(CheckError::Precondition(_))));
}

#[test]
fn equivalence_counterexample_between_term_and_spinning_iteration() {
    // term | envstep(qu' != qu)^w are not equivalent: the iteration accepts
    // an infinite env-changing lasso that term rejects.
    let decls = Decls::new(vec![VarDecl::seq("qu", vec![v(1)], 1)]);
    let cfg = CheckConfig::new(decls, 3).with_lassos();
    let iter = Command::iter_omega(Command::env_atomic(StateRelation::neq_primed("qu")));
    let r = equivalent(&Command::Term, &iter, &cfg).unwrap();
    match r.status {
        CheckStatus::Counterexample { trace, .. } => assert!(trace.is_lasso()),
        other => panic!("expected counterexample, got {other:?}"),
    }
}

#[test]
fn stability_results_match_the_paper() {
    let decls = Decls::new(vec![VarDecl::seq("qu", vec![v(1)], 1)]);
    // qu != [] is stable under qu prefixof qu'
    assert!(check_stability(
        &StatePredicate::non_empty("qu"),
        &StateRelation::prefix_of("qu"),
        &decls
    )
    .unwrap()
    .passed());
    // #qu < N is stable under qu' suffixof qu
    let decls2 = Decls::new(vec![VarDecl::seq("qu", vec![Value::Null, v(1), v(2)], 2)]);
    assert!(check_stability(
        &StatePredicate::len_lt("qu", 2),
        &StateRelation::suffix_of("qu"),
        &decls2
    )
    .unwrap()
    .passed());
    // negative control: qu != [] under qu' suffixof qu fails with [1] -> []
    let r = check_stability(
        &StatePredicate::non_empty("qu"),
        &StateRelation::suffix_of("qu"),
        &decls,
    )
    .unwrap();
    match r.status {
        CheckStatus::Counterexample { trace, .. } => {
            let d = Decls::new(vec![VarDecl::seq("qu", vec![v(1)], 1)]);
            assert_eq!(trace.steps[0].pre.render(&d), "qu=[1]");
            assert_eq!(trace.steps[0].post.render(&d), "qu=[]");
        }
        other => panic!("expected counterexample, got {other:?}"),
    }
}

#[test]
fn refines_is_transitive_on_the_derivation_chain() {
    // append-spec refines prefix-spec refines universal-spec, and the
    // composition holds directly.
    let cfg = CheckConfig::new(qu_decls(2, 1), 4);
    let weakest = Command::spec(Frame::of(&["qu"]), StateRelation::Universal);
    assert!(refines(&weakest, &prefix_spec(), &cfg).unwrap().passed());
    assert!(refines(&prefix_spec(), &append_spec(), &cfg).unwrap().passed());
    assert!(refines(&weakest, &append_spec(), &cfg).unwrap().passed());
}

#[test]
fn equivalent_is_reflexive_and_symmetric_at_bound() {
    let cfg = CheckConfig::new(qu_decls(1, 1), 3).with_lassos();
    let c = Command::conj(
        Command::rely(StateRelation::suffix_of("qu")),
        Command::with("qu", append_spec()),
    );
    assert!(equivalent(&c, &c, &cfg).unwrap().passed());
    let d = Command::conj(
        Command::with("qu", append_spec()),
        Command::rely(StateRelation::suffix_of("qu")),
    );
    assert!(equivalent(&c, &d, &cfg).unwrap().passed());
    assert!(equivalent(&d, &c, &cfg).unwrap().passed());
}
