//! Round-trip fidelity of the shipped corpus and of generated commands.

use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;

use rgcheck::casestudies::{bounded_queue_terminate_spec, queue_spec_srsw, stack_explicit_spec};
use rgcheck::dsl::{parse_command, print_command};
use rgcheck::kernel::{
    Command, Frame, StatePredicate, StateRelation, TemporalFormula, Value, VarName,
};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn read_corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn corpus_parses_and_round_trips() {
    for name in [
        "fig1_write.rg",
        "fig1_read.rg",
        "fig2_write.rg",
        "fig2_read.rg",
        "fig3_write.rg",
        "fig3_read.rg",
        "fig4_push.rg",
        "fig4_pop.rg",
        "fig5_push.rg",
        "fig5_pop.rg",
    ] {
        let text = read_corpus(name);
        let cmd = parse_command(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print_command(&cmd);
        let back = parse_command(&printed).unwrap_or_else(|e| panic!("{name} reprint: {e}"));
        assert_eq!(back, cmd, "{name} round-trip via `{printed}`");
    }
}

#[test]
fn corpus_matches_builders() {
    let fig1 = queue_spec_srsw();
    assert_eq!(parse_command(&read_corpus("fig1_write.rg")).unwrap(), fig1.write);
    assert_eq!(parse_command(&read_corpus("fig1_read.rg")).unwrap(), fig1.read);
    let fig3 = bounded_queue_terminate_spec(2).unwrap();
    assert_eq!(parse_command(&read_corpus("fig3_write.rg")).unwrap(), fig3.write);
    assert_eq!(parse_command(&read_corpus("fig3_read.rg")).unwrap(), fig3.read);
    let fig4 = stack_explicit_spec();
    assert_eq!(parse_command(&read_corpus("fig4_push.rg")).unwrap(), fig4.write);
    assert_eq!(parse_command(&read_corpus("fig4_pop.rg")).unwrap(), fig4.read);
}

// ---- generated commands ----

fn arb_value() -> impl Strategy<Value = Value> {
    prop_oneof![Just(Value::Null), (0i64..5).prop_map(Value::Int)]
}

fn arb_var() -> impl Strategy<Value = String> {
    prop_oneof![Just("qu".to_string()), Just("s".to_string()), Just("res".to_string())]
}

fn arb_pred() -> impl Strategy<Value = StatePredicate> {
    let leaf = prop_oneof![
        Just(StatePredicate::True),
        Just(StatePredicate::False),
        arb_var().prop_map(StatePredicate::non_empty),
        (arb_var(), 0usize..4).prop_map(|(v, n)| StatePredicate::len_lt(v, n)),
        (arb_var(), arb_value()).prop_map(|(v, x)| StatePredicate::eq_scalar(v, x)),
        (arb_var(), arb_value()).prop_map(|(v, x)| StatePredicate::neq_scalar(v, x)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StatePredicate::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StatePredicate::or(a, b)),
            inner.prop_map(StatePredicate::not),
        ]
    })
}

fn arb_rel() -> impl Strategy<Value = StateRelation> {
    let leaf = prop_oneof![
        Just(StateRelation::Universal),
        arb_var().prop_map(StateRelation::eq_primed),
        arb_var().prop_map(StateRelation::neq_primed),
        arb_var().prop_map(StateRelation::prefix_of),
        arb_var().prop_map(StateRelation::suffix_of),
        (arb_var(), arb_value()).prop_map(|(v, x)| StateRelation::append_lit(v, x)),
        (arb_var(), arb_var()).prop_map(|(v, h)| StateRelation::cons_head(v, h)),
        arb_pred().prop_map(StateRelation::Pre),
        arb_pred().prop_map(StateRelation::Post),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StateRelation::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StateRelation::or(a, b)),
            inner.prop_map(StateRelation::not),
        ]
    })
}

fn arb_formula() -> impl Strategy<Value = TemporalFormula> {
    let leaf = prop_oneof![
        arb_pred().prop_map(TemporalFormula::StateAtom),
        arb_rel().prop_map(|r| TemporalFormula::StepAtom(
            rgcheck::kernel::StepKindFilter::Env,
            r
        )),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| TemporalFormula::Eventually(Box::new(f))),
            inner.clone().prop_map(|f| TemporalFormula::Always(Box::new(f))),
            inner.clone().prop_map(|f| TemporalFormula::Not(Box::new(f))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| TemporalFormula::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn arb_frame() -> impl Strategy<Value = Frame> {
    prop_oneof![
        Just(Frame::All),
        proptest::collection::btree_set(arb_var(), 0..3).prop_map(|vars| {
            Frame::Of(vars.into_iter().map(VarName::new).collect::<BTreeSet<_>>())
        }),
    ]
}

fn arb_command() -> impl Strategy<Value = Command> {
    let leaf = prop_oneof![
        Just(Command::Term),
        arb_pred().prop_map(Command::pre),
        arb_rel().prop_map(Command::rely),
        arb_rel().prop_map(Command::guar),
        arb_rel().prop_map(Command::env_atomic),
        (arb_frame(), arb_rel()).prop_map(|(f, r)| Command::spec(f, r)),
        arb_formula().prop_map(Command::Encode),
        arb_formula().prop_map(Command::terminate),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Command::conj(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Command::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Command::choice(a, b)),
            inner.clone().prop_map(Command::iter_omega),
            (arb_var(), inner.clone()).prop_map(|(v, c)| Command::with(v, c)),
            (arb_var(), arb_pred(), inner).prop_map(|(v, g, c)| Command::await_with(v, g, c)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(cmd in arb_command()) {
        let text = print_command(&cmd);
        let back = parse_command(&text)
            .unwrap_or_else(|e| panic!("reparse failure on `{text}`: {e}"));
        prop_assert_eq!(back, cmd, "via `{}`", text);
    }
}
