//! The queue and stack specification commands.
//!
//! Operations are built over a declared parameter variable `v` (the written
//! or pushed value) and, for value-returning operations, a result variable
//! `res`. Checks pin `v` by declaring it with a singleton domain, which also
//! makes environment interference on it impossible.

use crate::kernel::{
    Command, Decls, Frame, StatePredicate, StateRelation, TemporalFormula, Value, VarDecl,
};

/// The commands of one operation pair.
#[derive(Clone, Debug)]
pub struct OpSpecs {
    pub write: Command,
    pub read: Command,
}

/// Await interpretation for the multi-client queue.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fairness {
    Weak,
    Strong,
}

fn rely_write() -> Command {
    Command::rely(StateRelation::suffix_of("qu"))
}

fn guar_write() -> Command {
    Command::guar(StateRelation::prefix_of("qu"))
}

fn rely_read() -> Command {
    Command::rely(StateRelation::prefix_of("qu"))
}

fn guar_read() -> Command {
    Command::guar(StateRelation::suffix_of("qu"))
}

fn write_body() -> Command {
    Command::spec(Frame::of(&["qu"]), StateRelation::append_var("qu", "v"))
}

fn read_body() -> Command {
    Command::spec(Frame::of(&["qu", "res"]), StateRelation::cons_head("qu", "res"))
}

/// Fig. 1: single-reader single-writer message queue.
pub fn queue_spec_srsw() -> OpSpecs {
    let write = Command::conj(
        rely_write(),
        Command::conj(guar_write(), Command::with("qu", write_body())),
    );
    let read = Command::conj(
        rely_read(),
        Command::conj(
            guar_read(),
            Command::seq(
                Command::pre(StatePredicate::non_empty("qu")),
                Command::with("qu", read_body()),
            ),
        ),
    );
    OpSpecs { write, read }
}

/// Fig. 2: bounded queue with blocking `await` operations.
pub fn bounded_queue_await_spec(n: usize) -> Result<OpSpecs, crate::kernel::KernelError> {
    if n < 1 {
        return Err(crate::kernel::KernelError::Config(
            "queue capacity must be at least 1".into(),
        ));
    }
    let write = Command::conj(
        rely_write(),
        Command::conj(
            guar_write(),
            Command::await_with(
                "qu",
                StatePredicate::len_lt("qu", n),
                Command::seq(
                    Command::pre(StatePredicate::len_lt("qu", n)),
                    write_body(),
                ),
            ),
        ),
    );
    let read = Command::conj(
        rely_read(),
        Command::conj(
            guar_read(),
            Command::await_with(
                "qu",
                StatePredicate::non_empty("qu"),
                Command::seq(
                    Command::pre(StatePredicate::non_empty("qu")),
                    read_body(),
                ),
            ),
        ),
    );
    Ok(OpSpecs { write, read })
}

/// Fig. 3: bounded queue with temporal termination conditions instead of
/// awaits.
pub fn bounded_queue_terminate_spec(n: usize) -> Result<OpSpecs, crate::kernel::KernelError> {
    if n < 1 {
        return Err(crate::kernel::KernelError::Config(
            "queue capacity must be at least 1".into(),
        ));
    }
    let write = Command::conj(
        Command::terminate(TemporalFormula::eventually(TemporalFormula::atom(
            StatePredicate::len_lt("qu", n),
        ))),
        Command::conj(
            rely_write(),
            Command::conj(guar_write(), Command::with("qu", write_body())),
        ),
    );
    let read = Command::conj(
        Command::terminate(TemporalFormula::eventually(TemporalFormula::atom(
            StatePredicate::non_empty("qu"),
        ))),
        Command::conj(
            rely_read(),
            Command::conj(guar_read(), Command::with("qu", read_body())),
        ),
    );
    Ok(OpSpecs { write, read })
}

/// Multiple readers and writers: relies dropped, termination condition
/// strengthened according to the fairness of the await being replaced.
pub fn multi_client_terminate_spec(fairness: Fairness, n: usize) -> OpSpecs {
    let write_cond = match fairness {
        Fairness::Weak => TemporalFormula::eventually(TemporalFormula::always(
            TemporalFormula::atom(StatePredicate::len_lt("qu", n)),
        )),
        Fairness::Strong => TemporalFormula::always(TemporalFormula::eventually(
            TemporalFormula::atom(StatePredicate::len_lt("qu", n)),
        )),
    };
    let read_cond = match fairness {
        Fairness::Weak => TemporalFormula::eventually(TemporalFormula::always(
            TemporalFormula::atom(StatePredicate::non_empty("qu")),
        )),
        Fairness::Strong => TemporalFormula::always(TemporalFormula::eventually(
            TemporalFormula::atom(StatePredicate::non_empty("qu")),
        )),
    };
    let write = Command::conj(
        Command::terminate(write_cond),
        Command::conj(guar_write(), Command::with("qu", write_body())),
    );
    let read = Command::conj(
        Command::terminate(read_cond),
        Command::conj(guar_read(), Command::with("qu", read_body())),
    );
    OpSpecs { write, read }
}

fn push_body() -> Command {
    Command::spec(Frame::of(&["s"]), StateRelation::prepend_var("s", "v"))
}

/// `(s ≠ [] ⇒ s = [res'] ++ s') ∧ (s = [] ⇒ res' = null)`.
fn pop_post() -> StateRelation {
    StateRelation::and(
        StateRelation::implies(
            StateRelation::Pre(StatePredicate::non_empty("s")),
            StateRelation::cons_head("s", "res"),
        ),
        StateRelation::or(
            StateRelation::Pre(StatePredicate::non_empty("s")),
            StateRelation::Post(StatePredicate::eq_scalar("res", Value::Null)),
        ),
    )
}

fn pop_body() -> Command {
    Command::spec(Frame::of(&["s", "res"]), pop_post())
}

/// Fig. 4: stack whose operations may fail on interference and retry,
/// possibly forever. `fail` is one environment step changing the stack.
pub fn stack_explicit_spec() -> OpSpecs {
    let fail = Command::env_atomic(StateRelation::neq_primed("s"));
    let push_success = Command::conj(Command::with("s", push_body()), Command::Term);
    let push = Command::seq(
        Command::pre(StatePredicate::neq_scalar("v", Value::Null)),
        Command::seq(Command::iter_omega(fail.clone()), push_success),
    );
    let pop_success = Command::conj(Command::with("s", pop_body()), Command::Term);
    let pop = Command::seq(Command::iter_omega(fail), pop_success);
    OpSpecs {
        write: push,
        read: pop,
    }
}

/// Fig. 5: stack with the quiescence termination condition
/// `<>[]e(s' = s)`.
pub fn stack_terminate_spec() -> OpSpecs {
    let quiesce = TemporalFormula::eventually(TemporalFormula::always_env(
        StateRelation::eq_primed("s"),
    ));
    let push = Command::seq(
        Command::pre(StatePredicate::neq_scalar("v", Value::Null)),
        Command::conj(
            Command::terminate(quiesce.clone()),
            Command::with("s", push_body()),
        ),
    );
    let pop = Command::conj(
        Command::terminate(quiesce),
        Command::with("s", pop_body()),
    );
    OpSpecs {
        write: push,
        read: pop,
    }
}

/// Declarations for queue checks: `qu` over `values` capped at `cap`, the
/// parameter `v` pinned to one value, and optionally `res`.
pub fn queue_decls(values: &[Value], cap: usize, v: Value, with_res: bool) -> Decls {
    let mut vars = vec![
        VarDecl::seq("qu", values.to_vec(), cap),
        VarDecl::scalar("v", vec![v]),
    ];
    if with_res {
        let mut dom = vec![Value::Null];
        dom.extend_from_slice(values);
        vars.push(VarDecl::scalar("res", dom));
    }
    Decls::new(vars)
}

/// Declarations for stack checks, mirroring [`queue_decls`].
pub fn stack_decls(values: &[Value], cap: usize, v: Value, with_res: bool) -> Decls {
    let mut vars = vec![
        VarDecl::seq("s", values.to_vec(), cap),
        VarDecl::scalar("v", vec![v]),
    ];
    if with_res {
        let mut dom = vec![Value::Null];
        dom.extend_from_slice(values);
        vars.push(VarDecl::scalar("res", dom));
    }
    Decls::new(vars)
}
