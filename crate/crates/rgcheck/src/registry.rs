//! The named check registry and machine-readable run reports.
//!
//! Every check the acceptance suite relies on is addressable by name here;
//! the CLI front end is a thin wrapper. Default bounds are pinned so that
//! the whole registry runs in seconds; a configuration file or flags can
//! override `max_len`, `lassos`, `values`, `seq_cap`, `n` and the search
//! budget where meaningful.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::casestudies::{
    bounded_queue_await_spec, bounded_queue_terminate_spec, check_invariant, conformance, explore,
    final_data_values, lock_queue_impl, lock_queue_impl_no_capacity_check,
    multi_client_terminate_spec, queue_decls, queue_spec_srsw, stack_decls, stack_explicit_spec,
    stack_terminate_spec, treiber_impl, treiber_impl_no_empty_check, ExploreConfig, Fairness,
    OpKind, OpWindow,
};
use crate::kernel::{
    Binding, Command, Decls, Frame, SeqVal, StatePredicate, StateRelation, StateSpace,
    TemporalFormula, Value, VarDecl, VarName,
};
use crate::refinement::{
    check_stability, equivalent, refines, ChainRel, ChainStep, CheckConfig, CheckStatus,
};
use crate::semantics::{accepts, partial_accepts, Verdict};
use crate::traces::{
    enumerate_lassos, enumerate_traces, format_trace, Step, StepFilters, StepKind, Trace,
};

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("check failed to run: {0}")]
    Run(String),
}

/// Overridable check parameters (`key = value` configuration files).
#[derive(Clone, Debug, Default)]
pub struct CheckParams {
    pub max_len: Option<usize>,
    pub lassos: Option<bool>,
    pub values: Option<Vec<Value>>,
    pub seq_cap: Option<usize>,
    pub n: Option<usize>,
    pub node_budget: Option<u64>,
}

impl CheckParams {
    /// Parses a plain `key = value` configuration file.
    pub fn parse(text: &str) -> Result<Self, RegistryError> {
        let mut p = CheckParams::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| {
                RegistryError::BadConfig(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, val) = (key.trim(), val.trim());
            let bad = |k: &str| RegistryError::BadConfig(format!("line {}: bad {k}", lineno + 1));
            match key {
                "max_len" => p.max_len = Some(val.parse().map_err(|_| bad("max_len"))?),
                "lassos" => p.lassos = Some(val.parse().map_err(|_| bad("lassos"))?),
                "seq_cap" => p.seq_cap = Some(val.parse().map_err(|_| bad("seq_cap"))?),
                "n" => p.n = Some(val.parse().map_err(|_| bad("n"))?),
                "node_budget" => p.node_budget = Some(val.parse().map_err(|_| bad("node_budget"))?),
                "values" => {
                    let mut vs = Vec::new();
                    for tok in val.split_whitespace() {
                        if tok == "null" {
                            vs.push(Value::Null);
                        } else {
                            vs.push(Value::Int(tok.parse().map_err(|_| bad("values"))?));
                        }
                    }
                    p.values = Some(vs);
                }
                other => {
                    return Err(RegistryError::BadConfig(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Pass,
    Fail,
    Error,
}

/// One line of the machine-readable report.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub check: String,
    pub config: String,
    pub status: ReportStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub traces_checked: u64,
    pub wall_ms: u128,
    /// 0 pass, 1 fail (counterexample), 3 budget exceeded.
    pub exit_code: i32,
}

impl RunReport {
    pub fn human(&self) -> String {
        let status = match self.status {
            ReportStatus::Pass => "PASS",
            ReportStatus::Fail => "FAIL",
            ReportStatus::Error => "ERROR",
        };
        format!(
            "{status} {} [{}] {} ({} traces, {} ms)",
            self.check, self.config, self.detail, self.traces_checked, self.wall_ms
        )
    }
}

/// Names and one-line descriptions of every registered check.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("law-rely-with", "Law rely-with over the full configuration matrix"),
        ("law-guar-with", "Law guar-with over the full configuration matrix"),
        ("derivation-write-rely", "rely chain for the write operation"),
        ("derivation-write-guar", "guarantee chain for the write operation"),
        ("derivation-write-combined", "combined refinement of write"),
        ("fig2-equiv-fig3", "await queue equals terminate queue (read and write)"),
        ("fig4-equiv-fig5", "explicit-failure stack equals quiescence stack (push and pop)"),
        ("stability-read-pre", "qu != [] is stable under qu prefixof qu'"),
        ("stability-write-guard", "#qu < N is stable under qu' suffixof qu"),
        ("stability-negative-control", "qu != [] under qu' suffixof qu yields [1] -> []"),
        ("fairness-distinction", "weak vs strong termination on the alternating lasso"),
        ("conformance-treiber", "Treiber stack model conforms to the explicit stack spec"),
        ("conformance-lockqueue", "lock-based queue model conforms to the SRSW queue spec"),
        ("mutation-pop-no-empty-check", "buggy pop is caught by conformance"),
        ("mutation-write-no-capacity-check", "buggy write violates the data-type invariant"),
        ("final-state-oracle", "two concurrent pushes leave exactly the two expected stacks"),
        ("infeasibility-fig4-push", "failure iterations are bounded by environment changes"),
        ("semantics-algebra", "conjunction/spec-merge/duality properties over enumerated traces"),
        ("term-vs-retry-loop", "demonstration: term is not equivalent to a retry loop (fails with a counterexample)"),
    ]
}

fn config_echo(params: &CheckParams, defaults: &str) -> String {
    let mut parts = vec![defaults.to_string()];
    if let Some(v) = params.max_len {
        parts.push(format!("max_len={v}"));
    }
    if let Some(v) = params.lassos {
        parts.push(format!("lassos={v}"));
    }
    if let Some(v) = params.seq_cap {
        parts.push(format!("seq_cap={v}"));
    }
    if let Some(v) = params.n {
        parts.push(format!("n={v}"));
    }
    if let Some(vs) = &params.values {
        let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        parts.push(format!("values={}", vs.join(" ")));
    }
    parts.join(" ")
}

/// A single refinement obligation inside a named check.
pub struct RefinePair {
    pub sub: String,
    pub abs: Command,
    pub conc: Command,
    pub cfg: CheckConfig,
    pub equivalence: bool,
}

fn default_values(params: &CheckParams) -> Vec<Value> {
    params
        .values
        .clone()
        .unwrap_or_else(|| vec![Value::Null, Value::Int(1), Value::Int(2)])
}

fn law_matrix(params: &CheckParams) -> Vec<(usize, usize, Value)> {
    let caps: Vec<usize> = match params.seq_cap {
        Some(c) => vec![c],
        None => vec![1, 2, 3],
    };
    let lens: Vec<usize> = match params.max_len {
        Some(l) => vec![l],
        None => vec![4, 6],
    };
    let values: Vec<Value> = default_values(params)
        .into_iter()
        .filter(|v| *v != Value::Null)
        .collect();
    let mut out = Vec::new();
    for &cap in &caps {
        for &len in &lens {
            for &v in &values {
                out.push((cap, len, v));
            }
        }
    }
    out
}

fn write_spec_body() -> Command {
    Command::spec(Frame::of(&["qu"]), StateRelation::append_var("qu", "v"))
}

fn apply_budget(mut cfg: CheckConfig, params: &CheckParams) -> CheckConfig {
    if let Some(b) = params.node_budget {
        cfg.node_budget = b;
    }
    cfg
}

/// The refinement obligations behind a refinement-family check, used both to
/// run it and to replay counterexamples.
pub fn refine_pairs(name: &str, params: &CheckParams) -> Option<Vec<RefinePair>> {
    match name {
        "law-rely-with" | "law-guar-with" => {
            let mut pairs = Vec::new();
            for (cap, len, v) in law_matrix(params) {
                let decls = queue_decls(&default_values(params), cap, v, false);
                let cfg = apply_budget(CheckConfig::new(decls, len), params);
                let c = write_spec_body();
                let (abs, conc) = if name == "law-rely-with" {
                    let r = StateRelation::suffix_of("qu");
                    let abs = Command::conj(
                        Command::rely(r.clone()),
                        Command::with("qu", c.clone()),
                    );
                    let conc = Command::with(
                        "qu",
                        Command::conj(
                            Command::rely(StateRelation::and(
                                r,
                                StateRelation::eq_primed("qu"),
                            )),
                            c,
                        ),
                    );
                    (abs, conc)
                } else {
                    let gd = StateRelation::prefix_of("qu");
                    let abs = Command::conj(
                        Command::guar(StateRelation::and(gd.clone(), StateRelation::Universal)),
                        Command::with("qu", c.clone()),
                    );
                    let conc = Command::with(
                        "qu",
                        Command::conj(
                            Command::guar(StateRelation::Universal),
                            Command::conj(Command::spec(Frame::All, gd), c),
                        ),
                    );
                    (abs, conc)
                };
                pairs.push(RefinePair {
                    sub: format!("cap{cap}-len{len}-v{v}"),
                    abs,
                    conc,
                    cfg,
                    equivalence: false,
                });
            }
            Some(pairs)
        }
        "derivation-write-rely" | "derivation-write-guar" | "derivation-write-combined" => {
            let mut pairs = Vec::new();
            let caps: Vec<usize> = match params.seq_cap {
                Some(c) => vec![c],
                None => vec![2, 3],
            };
            for cap in caps {
                for v in default_values(params).into_iter().filter(|v| *v != Value::Null) {
                    let decls = queue_decls(&default_values(params), cap, v, false);
                    let len = params.max_len.unwrap_or(6);
                    let cfg = apply_budget(CheckConfig::new(decls, len), params);
                    for step in derivation_chain(name) {
                        pairs.push(RefinePair {
                            sub: format!("{}-cap{cap}-v{v}", step.note),
                            abs: step.lhs,
                            conc: step.rhs,
                            cfg: cfg.clone(),
                            equivalence: step.rel == ChainRel::Equal,
                        });
                    }
                }
            }
            Some(pairs)
        }
        "fig2-equiv-fig3" => {
            let n = params.n.unwrap_or(1);
            let values = params
                .values
                .clone()
                .unwrap_or_else(|| vec![Value::Null, Value::Int(1)]);
            let len = params.max_len.unwrap_or(4);
            let fig2 = bounded_queue_await_spec(n).ok()?;
            let fig3 = bounded_queue_terminate_spec(n).ok()?;
            let wcfg = apply_budget(
                CheckConfig::new(queue_decls(&values, n, Value::Int(1), false), len).with_lassos(),
                params,
            );
            let rcfg = apply_budget(
                CheckConfig::new(queue_decls(&values, n, Value::Int(1), true), len)
                    .with_lassos()
                    .env_rely(StateRelation::id(&["res"])),
                params,
            );
            Some(vec![
                RefinePair {
                    sub: "write".into(),
                    abs: fig2.write.clone(),
                    conc: fig3.write.clone(),
                    cfg: wcfg,
                    equivalence: true,
                },
                RefinePair {
                    sub: "read".into(),
                    abs: fig2.read,
                    conc: fig3.read,
                    cfg: rcfg,
                    equivalence: true,
                },
            ])
        }
        "fig4-equiv-fig5" => {
            let values = params.values.clone().unwrap_or_else(|| vec![Value::Int(1)]);
            let cap = params.seq_cap.unwrap_or(2);
            let len = params.max_len.unwrap_or(4);
            let fig4 = stack_explicit_spec();
            let fig5 = stack_terminate_spec();
            let pcfg = apply_budget(
                CheckConfig::new(stack_decls(&values, cap, Value::Int(1), false), len)
                    .with_lassos(),
                params,
            );
            let ocfg = apply_budget(
                CheckConfig::new(stack_decls(&values, cap, Value::Int(1), true), len)
                    .with_lassos()
                    .env_rely(StateRelation::id(&["res"])),
                params,
            );
            Some(vec![
                RefinePair {
                    sub: "push".into(),
                    abs: fig4.write.clone(),
                    conc: fig5.write.clone(),
                    cfg: pcfg,
                    equivalence: true,
                },
                RefinePair {
                    sub: "pop".into(),
                    abs: fig4.read,
                    conc: fig5.read,
                    cfg: ocfg,
                    equivalence: true,
                },
            ])
        }
        "term-vs-retry-loop" => {
            let values = params.values.clone().unwrap_or_else(|| vec![Value::Int(1)]);
            let cap = params.seq_cap.unwrap_or(1);
            let len = params.max_len.unwrap_or(3);
            let decls = Decls::new(vec![VarDecl::seq("s", values, cap)]);
            let cfg = apply_budget(CheckConfig::new(decls, len).with_lassos(), params);
            let spin = Command::iter_omega(Command::env_atomic(StateRelation::neq_primed("s")));
            Some(vec![RefinePair {
                sub: "term-vs-spin".into(),
                abs: Command::Term,
                conc: spin,
                cfg,
                equivalence: true,
            }])
        }
        "fairness-distinction" => {
            let n = params.n.unwrap_or(1);
            let values = params
                .values
                .clone()
                .unwrap_or_else(|| vec![Value::Null, Value::Int(1)]);
            let len = params.max_len.unwrap_or(4);
            let weak = multi_client_terminate_spec(Fairness::Weak, n);
            let strong = multi_client_terminate_spec(Fairness::Strong, n);
            let cfg = apply_budget(
                CheckConfig::new(queue_decls(&values, n, Value::Int(1), true), len)
                    .with_lassos()
                    .env_rely(StateRelation::id(&["res"])),
                params,
            );
            Some(vec![RefinePair {
                sub: "weak-refined-by-strong".into(),
                abs: weak.read,
                conc: strong.read,
                cfg,
                equivalence: false,
            }])
        }
        _ => None,
    }
}

/// The two worked derivation chains for `write` from the resource-law
/// section, plus the combined refinement.
pub fn derivation_chain(name: &str) -> Vec<ChainStep> {
    let rely = StateRelation::suffix_of("qu");
    let guar = StateRelation::prefix_of("qu");
    let body = write_spec_body();
    let with_body = Command::with("qu", body.clone());
    match name {
        "derivation-write-rely" => vec![
            // (rely r) /\ with qu spec  ⊑  with qu ((rely r && qu'=qu) /\ spec)
            ChainStep {
                lhs: Command::conj(Command::rely(rely.clone()), with_body.clone()),
                rel: ChainRel::Refines,
                rhs: Command::with(
                    "qu",
                    Command::conj(
                        Command::rely(StateRelation::and(
                            rely.clone(),
                            StateRelation::eq_primed("qu"),
                        )),
                        body.clone(),
                    ),
                ),
                note: "law-rely-with".into(),
            },
            // = with qu ((rely qu'=qu) /\ spec), as qu'=qu implies suffixof
            ChainStep {
                lhs: Command::with(
                    "qu",
                    Command::conj(
                        Command::rely(StateRelation::and(
                            rely.clone(),
                            StateRelation::eq_primed("qu"),
                        )),
                        body.clone(),
                    ),
                ),
                rel: ChainRel::Equal,
                rhs: Command::with(
                    "qu",
                    Command::conj(Command::rely(StateRelation::eq_primed("qu")), body.clone()),
                ),
                note: "drop-redundant-suffixof".into(),
            },
        ],
        "derivation-write-guar" => vec![
            // (guar gd && true) /\ with qu spec ⊑ with qu (guar true /\ [gd] /\ spec)
            ChainStep {
                lhs: Command::conj(
                    Command::guar(StateRelation::and(guar.clone(), StateRelation::Universal)),
                    with_body.clone(),
                ),
                rel: ChainRel::Refines,
                rhs: Command::with(
                    "qu",
                    Command::conj(
                        Command::guar(StateRelation::Universal),
                        Command::conj(
                            Command::spec(Frame::All, guar.clone()),
                            body.clone(),
                        ),
                    ),
                ),
                note: "law-guar-with".into(),
            },
            // = with qu spec{qu}[gd && post], guar(true) is the identity and
            // frameless/framed specs merge
            ChainStep {
                lhs: Command::with(
                    "qu",
                    Command::conj(
                        Command::guar(StateRelation::Universal),
                        Command::conj(
                            Command::spec(Frame::All, guar.clone()),
                            body.clone(),
                        ),
                    ),
                ),
                rel: ChainRel::Equal,
                rhs: Command::with(
                    "qu",
                    Command::spec(
                        Frame::of(&["qu"]),
                        StateRelation::and(
                            guar.clone(),
                            StateRelation::append_var("qu", "v"),
                        ),
                    ),
                ),
                note: "spec-merge".into(),
            },
            // = with qu spec, the append implies prefixof
            ChainStep {
                lhs: Command::with(
                    "qu",
                    Command::spec(
                        Frame::of(&["qu"]),
                        StateRelation::and(
                            guar.clone(),
                            StateRelation::append_var("qu", "v"),
                        ),
                    ),
                ),
                rel: ChainRel::Equal,
                rhs: with_body.clone(),
                note: "drop-implied-prefixof".into(),
            },
        ],
        "derivation-write-combined" => vec![ChainStep {
            lhs: Command::conj(
                Command::rely(rely),
                Command::conj(Command::guar(guar), with_body),
            ),
            rel: ChainRel::Refines,
            rhs: Command::with(
                "qu",
                Command::conj(Command::rely(StateRelation::eq_primed("qu")), body),
            ),
            note: "combined".into(),
        }],
        _ => Vec::new(),
    }
}

fn run_pairs(
    name: &str,
    params: &CheckParams,
    pairs: Vec<RefinePair>,
    echo: String,
) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let mut traces = 0u64;
    for pair in pairs {
        let result = if pair.equivalence {
            equivalent(&pair.abs, &pair.conc, &pair.cfg)
        } else {
            refines(&pair.abs, &pair.conc, &pair.cfg)
        }
        .map_err(|e| RegistryError::Run(e.to_string()))?;
        traces += result.traces_checked;
        match result.status {
            CheckStatus::Pass => {}
            CheckStatus::Counterexample {
                trace,
                abstract_verdict,
                concrete_verdict,
            } => {
                return Ok(RunReport {
                    check: name.into(),
                    config: echo,
                    status: ReportStatus::Fail,
                    detail: format!(
                        "counterexample in sub-check {} (abstract: {abstract_verdict}, concrete: {concrete_verdict})",
                        pair.sub
                    ),
                    counterexample: Some(format_trace(&trace, &pair.cfg.decls)),
                    traces_checked: traces,
                    wall_ms: start.elapsed().as_millis(),
                    exit_code: 1,
                });
            }
            CheckStatus::BudgetExceeded { visited } => {
                return Ok(RunReport {
                    check: name.into(),
                    config: echo,
                    status: ReportStatus::Error,
                    detail: format!(
                        "search budget exceeded in sub-check {} after {visited} configurations",
                        pair.sub
                    ),
                    counterexample: None,
                    traces_checked: traces,
                    wall_ms: start.elapsed().as_millis(),
                    exit_code: 3,
                });
            }
        }
    }
    let _ = params;
    Ok(RunReport {
        check: name.into(),
        config: echo,
        status: ReportStatus::Pass,
        detail: "validated at bound".into(),
        counterexample: None,
        traces_checked: traces,
        wall_ms: start.elapsed().as_millis(),
        exit_code: 0,
    })
}

fn stability_report(
    name: &str,
    p: &StatePredicate,
    r: &StateRelation,
    decls: &Decls,
    expect_counterexample: bool,
    echo: String,
) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let result = check_stability(p, r, decls).map_err(|e| RegistryError::Run(e.to_string()))?;
    let (status, detail, cex, exit) = match (&result.status, expect_counterexample) {
        (CheckStatus::Pass, false) => (ReportStatus::Pass, "stable".to_string(), None, 0),
        (CheckStatus::Counterexample { trace, .. }, true) => (
            ReportStatus::Pass,
            "expected counterexample found".to_string(),
            Some(format_trace(trace, decls)),
            0,
        ),
        (CheckStatus::Pass, true) => (
            ReportStatus::Fail,
            "expected a counterexample, none found".to_string(),
            None,
            1,
        ),
        (CheckStatus::Counterexample { trace, .. }, false) => (
            ReportStatus::Fail,
            "predicate is not stable".to_string(),
            Some(format_trace(trace, decls)),
            1,
        ),
        (CheckStatus::BudgetExceeded { .. }, _) => {
            (ReportStatus::Error, "budget exceeded".to_string(), None, 3)
        }
    };
    Ok(RunReport {
        check: name.into(),
        config: echo,
        status,
        detail,
        counterexample: cex,
        traces_checked: result.traces_checked,
        wall_ms: start.elapsed().as_millis(),
        exit_code: exit,
    })
}

/// Runs one named check.
pub fn run_check(name: &str, params: &CheckParams) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    match name {
        "law-rely-with" | "law-guar-with" => {
            let pairs = refine_pairs(name, params).expect("registered");
            let mut report = run_pairs(
                name,
                params,
                pairs,
                config_echo(params, "matrix cap{1,2,3} x len{4,6} x v{1,2}"),
            )?;
            if name == "law-rely-with" && report.status == ReportStatus::Pass {
                // The paper states the law in one direction; report the
                // reverse informationally.
                let decls = queue_decls(&default_values(params), 1, Value::Int(1), false);
                let cfg = CheckConfig::new(decls, 4);
                let r = StateRelation::suffix_of("qu");
                let abs = Command::with(
                    "qu",
                    Command::conj(
                        Command::rely(StateRelation::and(
                            r.clone(),
                            StateRelation::eq_primed("qu"),
                        )),
                        write_spec_body(),
                    ),
                );
                let conc = Command::conj(Command::rely(r), Command::with("qu", write_spec_body()));
                let rev = refines(&abs, &conc, &cfg).map_err(|e| RegistryError::Run(e.to_string()))?;
                report.detail = format!(
                    "validated at bound; reverse direction (informational): {}",
                    if rev.passed() { "also holds at cap 1, len 4" } else { "does not hold" }
                );
            }
            Ok(report)
        }
        "derivation-write-rely" | "derivation-write-guar" | "derivation-write-combined"
        | "fig2-equiv-fig3" | "fig4-equiv-fig5" | "fairness-distinction"
        | "term-vs-retry-loop" => {
            let pairs = refine_pairs(name, params).expect("registered");
            let mut report = run_pairs(name, params, pairs, config_echo(params, "defaults"))?;
            if name == "fairness-distinction" && report.status == ReportStatus::Pass {
                // Also demand the verdict split on the alternating lasso.
                let (weak_v, strong_v, lasso_text) =
                    fairness_lasso_verdicts(params).map_err(RegistryError::Run)?;
                if weak_v != Verdict::AcceptedInfinite
                    || !matches!(strong_v, Verdict::Rejected { .. })
                {
                    report.status = ReportStatus::Fail;
                    report.exit_code = 1;
                    report.detail = format!(
                        "verdicts did not split: weak {weak_v}, strong {strong_v}"
                    );
                    report.counterexample = Some(lasso_text);
                } else {
                    report.detail = format!(
                        "weak accepts perpetual stuttering ({weak_v}), strong rejects it ({strong_v}); refines(weak, strong) holds"
                    );
                }
            }
            Ok(report)
        }
        "stability-read-pre" => {
            let decls = Decls::new(vec![VarDecl::seq("qu", default_values(params), 1)]);
            stability_report(
                name,
                &StatePredicate::non_empty("qu"),
                &StateRelation::prefix_of("qu"),
                &decls,
                false,
                config_echo(params, "cap 1"),
            )
        }
        "stability-write-guard" => {
            let n = params.n.unwrap_or(2);
            let decls = Decls::new(vec![VarDecl::seq("qu", default_values(params), n)]);
            stability_report(
                name,
                &StatePredicate::len_lt("qu", n),
                &StateRelation::suffix_of("qu"),
                &decls,
                false,
                config_echo(params, "cap n"),
            )
        }
        "stability-negative-control" => {
            let decls = Decls::new(vec![VarDecl::seq("qu", vec![Value::Int(1)], 1)]);
            let mut report = stability_report(
                name,
                &StatePredicate::non_empty("qu"),
                &StateRelation::suffix_of("qu"),
                &decls,
                true,
                config_echo(params, "values {1} cap 1"),
            )?;
            if report.status == ReportStatus::Pass {
                let expected = "init qu=[1]\nenv qu=[1] -> qu=[]\n";
                if report.counterexample.as_deref() != Some(expected) {
                    report.status = ReportStatus::Fail;
                    report.exit_code = 1;
                    report.detail = "counterexample is not the canonical [1] -> []".into();
                }
            }
            Ok(report)
        }
        "conformance-treiber" => conformance_treiber(params, false),
        "mutation-pop-no-empty-check" => conformance_treiber(params, true),
        "conformance-lockqueue" => conformance_lockqueue(params),
        "mutation-write-no-capacity-check" => mutation_write(params),
        "final-state-oracle" => final_state_oracle(params),
        "infeasibility-fig4-push" => infeasibility_check(params),
        "semantics-algebra" => {
            let outcome = algebra_properties(params).map_err(RegistryError::Run)?;
            Ok(RunReport {
                check: name.into(),
                config: config_echo(params, "qu cap 2, values {null,1}"),
                status: if outcome.violations.is_empty() {
                    ReportStatus::Pass
                } else {
                    ReportStatus::Fail
                },
                detail: if outcome.violations.is_empty() {
                    format!(
                        "all properties hold on {} finite traces and {} lassos",
                        outcome.finite_traces, outcome.lassos
                    )
                } else {
                    outcome.violations.join("; ")
                },
                counterexample: None,
                traces_checked: outcome.finite_traces + outcome.lassos,
                wall_ms: start.elapsed().as_millis(),
                exit_code: if outcome.violations.is_empty() { 0 } else { 1 },
            })
        }
        other => Err(RegistryError::UnknownCheck(other.to_string())),
    }
}

fn fairness_lasso_verdicts(
    params: &CheckParams,
) -> Result<(Verdict, Verdict, String), String> {
    let n = params.n.unwrap_or(1);
    let values = params
        .values
        .clone()
        .unwrap_or_else(|| vec![Value::Null, Value::Int(1)]);
    let decls = queue_decls(&values, n, Value::Int(1), true);
    let space = StateSpace::new(decls.clone()).map_err(|e| e.to_string())?;
    let weak = multi_client_terminate_spec(Fairness::Weak, n);
    let strong = multi_client_terminate_spec(Fairness::Strong, n);
    let empty = State {
        bindings: vec![
            Binding::Seq(SeqVal::empty()),
            Binding::Scalar(Value::Int(1)),
            Binding::Scalar(Value::Null),
        ],
    };
    let full = State {
        bindings: vec![
            Binding::Seq(SeqVal(vec![Value::Int(1)])),
            Binding::Scalar(Value::Int(1)),
            Binding::Scalar(Value::Null),
        ],
    };
    let lasso = Trace::lasso(
        empty.clone(),
        vec![
            Step {
                kind: StepKind::Env,
                pre: empty.clone(),
                post: full.clone(),
            },
            Step {
                kind: StepKind::Env,
                pre: full,
                post: empty,
            },
        ],
        0,
    );
    let weak_v = accepts(&weak.read, &lasso, &space).map_err(|e| e.to_string())?;
    let strong_v = accepts(&strong.read, &lasso, &space).map_err(|e| e.to_string())?;
    Ok((weak_v, strong_v, format_trace(&lasso, &decls)))
}

use crate::kernel::State;

fn conformance_treiber(params: &CheckParams, mutated: bool) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let name = if mutated {
        "mutation-pop-no-empty-check"
    } else {
        "conformance-treiber"
    };
    let values = params
        .values
        .clone()
        .unwrap_or_else(|| vec![Value::Int(1), Value::Int(2)]);
    let cap = params.seq_cap.unwrap_or(3);
    let threads = vec![
        vec![(OpKind::Push, Some(Value::Int(1)))],
        vec![(OpKind::Push, Some(Value::Int(2)))],
        vec![(OpKind::Pop, None)],
    ];
    let lts = if mutated {
        treiber_impl_no_empty_check(&threads, &values, cap)
    } else {
        treiber_impl(&threads, &values, cap)
    }
    .map_err(|e| RegistryError::Run(e.to_string()))?;
    let ecfg = ExploreConfig {
        max_len: params.max_len.unwrap_or(24),
        ..ExploreConfig::default()
    };
    let runs = explore(&lts, &ecfg).map_err(|e| RegistryError::Run(e.to_string()))?;
    let specs = stack_explicit_spec();
    let spec_of = move |w: &OpWindow| match w.kind {
        OpKind::Push => specs.write.clone(),
        _ => specs.read.clone(),
    };
    let out = conformance(&lts, &runs, &spec_of).map_err(|e| RegistryError::Run(e.to_string()))?;
    let spec_of2 = |w: &crate::casestudies::ConformanceFailure| spec_of(&w.window);
    let (status, detail, cex, exit) = match (&out.failure, mutated) {
        (None, false) => (
            ReportStatus::Pass,
            format!("{} windows over {} runs conform", out.windows_checked, out.runs),
            None,
            0,
        ),
        (Some(f), true) => (
            ReportStatus::Pass,
            format!(
                "mutation caught: {} window rejected ({})",
                f.window.kind.name(),
                f.verdict
            ),
            Some(format_trace(&f.window.trace, &f.window.decls)),
            0,
        ),
        (Some(f), false) => {
            let path = failing_path(&spec_of2(f), &f.window);
            (
                ReportStatus::Fail,
                format!(
                    "{} window rejected ({}) at {path}",
                    f.window.kind.name(),
                    f.verdict
                ),
                Some(format_trace(&f.window.trace, &f.window.decls)),
                1,
            )
        }
        (None, true) => (
            ReportStatus::Fail,
            "mutation was not caught".to_string(),
            None,
            1,
        ),
    };
    Ok(RunReport {
        check: name.into(),
        config: config_echo(params, "2 pushers + 1 popper"),
        status,
        detail,
        counterexample: cex,
        traces_checked: out.windows_checked,
        wall_ms: start.elapsed().as_millis(),
        exit_code: exit,
    })
}

fn conformance_lockqueue(params: &CheckParams) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let n = params.n.unwrap_or(2);
    let values = params
        .values
        .clone()
        .unwrap_or_else(|| vec![Value::Int(1), Value::Int(2)]);
    let cap = params.seq_cap.unwrap_or(3);
    let threads = vec![
        vec![
            (OpKind::Write, Some(Value::Int(1))),
            (OpKind::Write, Some(Value::Int(2))),
        ],
        vec![(OpKind::Read, None), (OpKind::Read, None)],
    ];
    let lts =
        lock_queue_impl(n, &threads, &values, cap).map_err(|e| RegistryError::Run(e.to_string()))?;
    let ecfg = ExploreConfig {
        max_len: params.max_len.unwrap_or(24),
        ..ExploreConfig::default()
    };
    let runs = explore(&lts, &ecfg).map_err(|e| RegistryError::Run(e.to_string()))?;
    let specs = queue_spec_srsw();
    let spec_of = move |w: &OpWindow| match w.kind {
        OpKind::Write => specs.write.clone(),
        _ => specs.read.clone(),
    };
    let out = conformance(&lts, &runs, &spec_of).map_err(|e| RegistryError::Run(e.to_string()))?;
    let inv = check_invariant(&lts, &runs).map_err(|e| RegistryError::Run(e.to_string()))?;
    // FIFO evidence: in every completed run the reader observed 1 then 2.
    let mut fifo_ok = true;
    for run in &runs {
        if run.loop_start.is_some() || run.capped {
            continue;
        }
        let r0 = run
            .final_state
            .get(&lts.decls, &VarName::new("res1_0"))
            .map_err(|e| RegistryError::Run(e.to_string()))?;
        let r1 = run
            .final_state
            .get(&lts.decls, &VarName::new("res1_1"))
            .map_err(|e| RegistryError::Run(e.to_string()))?;
        if *r0 != Binding::Scalar(Value::Int(1)) || *r1 != Binding::Scalar(Value::Int(2)) {
            fifo_ok = false;
        }
    }
    let pass = out.passed() && inv.is_none() && fifo_ok;
    let detail = if pass {
        format!(
            "{} windows over {} runs conform; invariant #qu <= {n} holds; FIFO order observed",
            out.windows_checked, out.runs
        )
    } else if let Some(f) = &out.failure {
        format!("{} window rejected ({})", f.window.kind.name(), f.verdict)
    } else if inv.is_some() {
        "data-type invariant violated".to_string()
    } else {
        "FIFO order violated".to_string()
    };
    Ok(RunReport {
        check: "conformance-lockqueue".into(),
        config: config_echo(params, "SRSW n=2, 2 writes, 2 reads"),
        status: if pass { ReportStatus::Pass } else { ReportStatus::Fail },
        detail,
        counterexample: out
            .failure
            .as_ref()
            .map(|f| format_trace(&f.window.trace, &f.window.decls)),
        traces_checked: out.windows_checked,
        wall_ms: start.elapsed().as_millis(),
        exit_code: if pass { 0 } else { 1 },
    })
}

fn mutation_write(params: &CheckParams) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let n = params.n.unwrap_or(2);
    let values = vec![Value::Int(1), Value::Int(2)];
    let threads = vec![
        vec![
            (OpKind::Write, Some(Value::Int(1))),
            (OpKind::Write, Some(Value::Int(2))),
        ],
        vec![
            (OpKind::Write, Some(Value::Int(1))),
            (OpKind::Write, Some(Value::Int(2))),
        ],
    ];
    let lts = lock_queue_impl_no_capacity_check(n, &threads, &values, n + 2)
        .map_err(|e| RegistryError::Run(e.to_string()))?;
    let runs = explore(&lts, &ExploreConfig::default())
        .map_err(|e| RegistryError::Run(e.to_string()))?;
    let violation = check_invariant(&lts, &runs).map_err(|e| RegistryError::Run(e.to_string()))?;
    let (status, detail, cex, exit) = match violation {
        Some((ri, si)) => {
            let run = &runs[ri];
            let steps: Vec<Step> = run.steps[..si]
                .iter()
                .map(|s| Step {
                    kind: StepKind::Pgm,
                    pre: s.pre.clone(),
                    post: s.post.clone(),
                })
                .collect();
            let trace = Trace::finite(run.init.clone(), steps);
            (
                ReportStatus::Pass,
                format!("mutation caught: #qu <= {n} violated at step {si} of run {ri}"),
                Some(format_trace(&trace, &lts.decls)),
                0,
            )
        }
        None => (
            ReportStatus::Fail,
            "mutation was not caught".to_string(),
            None,
            1,
        ),
    };
    Ok(RunReport {
        check: "mutation-write-no-capacity-check".into(),
        config: config_echo(params, "2 unchecked writers"),
        status,
        detail,
        counterexample: cex,
        traces_checked: runs.len() as u64,
        wall_ms: start.elapsed().as_millis(),
        exit_code: exit,
    })
}

fn final_state_oracle(params: &CheckParams) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let threads = vec![
        vec![(OpKind::Push, Some(Value::Int(1)))],
        vec![(OpKind::Push, Some(Value::Int(2)))],
    ];
    let lts = treiber_impl(&threads, &[Value::Int(1), Value::Int(2)], 2)
        .map_err(|e| RegistryError::Run(e.to_string()))?;
    let runs =
        explore(&lts, &ExploreConfig::default()).map_err(|e| RegistryError::Run(e.to_string()))?;
    let finals = final_data_values(&lts, &runs).map_err(|e| RegistryError::Run(e.to_string()))?;
    let expected = vec![
        Binding::Seq(SeqVal(vec![Value::Int(1), Value::Int(2)])),
        Binding::Seq(SeqVal(vec![Value::Int(2), Value::Int(1)])),
    ];
    let pass = finals == expected;
    Ok(RunReport {
        check: "final-state-oracle".into(),
        config: config_echo(params, "2 concurrent pushes of {1,2}"),
        status: if pass { ReportStatus::Pass } else { ReportStatus::Fail },
        detail: format!(
            "final stacks {:?}",
            finals.iter().map(|b| b.to_string()).collect::<Vec<_>>()
        ),
        counterexample: None,
        traces_checked: runs.len() as u64,
        wall_ms: start.elapsed().as_millis(),
        exit_code: if pass { 0 } else { 1 },
    })
}

/// Fig. 4 push with `j` explicit failure steps prepended to the iteration;
/// accepted only by traces with at least `j` environment changes to `s`.
fn push_with_forced_failures(j: usize) -> Command {
    let fail = || Command::env_atomic(StateRelation::neq_primed("s"));
    let success = Command::conj(
        Command::with(
            "s",
            Command::spec(Frame::of(&["s"]), StateRelation::prepend_var("s", "v")),
        ),
        Command::Term,
    );
    let mut tail = Command::seq(Command::iter_omega(fail()), success);
    for _ in 0..j {
        tail = Command::seq(fail(), tail);
    }
    Command::seq(
        Command::pre(StatePredicate::neq_scalar("v", Value::Null)),
        tail,
    )
}

fn infeasibility_check(params: &CheckParams) -> Result<RunReport, RegistryError> {
    let start = Instant::now();
    let max_len = params.max_len.unwrap_or(4);
    let decls = stack_decls(&[Value::Int(1)], params.seq_cap.unwrap_or(1), Value::Int(1), false);
    let space = StateSpace::new(decls.clone()).map_err(|e| RegistryError::Run(e.to_string()))?;
    let mut commands = Vec::new();
    for j in 0..=max_len {
        commands.push((j, push_with_forced_failures(j)));
    }
    let count_changes = |t: &Trace| -> Option<usize> {
        // None means infinitely many (an env change inside the cycle).
        let mut n = 0usize;
        for (i, s) in t.steps.iter().enumerate() {
            if s.kind == StepKind::Env && s.pre != s.post {
                if let crate::traces::TraceShape::Lasso { loop_start } = t.shape {
                    if i >= loop_start {
                        return None;
                    }
                }
                n += 1;
            }
        }
        Some(n)
    };
    let mut checked = 0u64;
    let mut run = |t: &Trace| -> Result<Option<String>, RegistryError> {
        checked += 1;
        let k = count_changes(t);
        for (j, cmd) in &commands {
            let v = accepts(cmd, t, &space).map_err(|e| RegistryError::Run(e.to_string()))?;
            if v.is_accepted() {
                if let Some(k) = k {
                    if *j > k {
                        return Ok(Some(format!(
                            "a decomposition used {j} failure iterations on a trace with only {k} environment changes"
                        )));
                    }
                }
            }
        }
        Ok(None)
    };
    let kinds = [StepKind::Pgm, StepKind::Env];
    let mut violation = None;
    for t in enumerate_traces(&space, max_len, &kinds, &StepFilters::none(), 2_000_000)
        .map_err(|e| RegistryError::Run(e.to_string()))?
    {
        let t = t.map_err(|e| RegistryError::Run(e.to_string()))?;
        if let Some(v) = run(&t)? {
            violation = Some(v);
            break;
        }
    }
    if violation.is_none() {
        for t in enumerate_lassos(&space, max_len, &kinds, &StepFilters::none(), 2_000_000)
            .map_err(|e| RegistryError::Run(e.to_string()))?
        {
            let t = t.map_err(|e| RegistryError::Run(e.to_string()))?;
            if let Some(v) = run(&t)? {
                violation = Some(v);
                break;
            }
        }
    }
    let pass = violation.is_none();
    Ok(RunReport {
        check: "infeasibility-fig4-push".into(),
        config: config_echo(params, "s over {1} cap 1"),
        status: if pass { ReportStatus::Pass } else { ReportStatus::Fail },
        detail: violation.unwrap_or_else(|| {
            format!("failure iterations bounded by environment changes on {checked} traces")
        }),
        counterexample: None,
        traces_checked: checked,
        wall_ms: start.elapsed().as_millis(),
        exit_code: if pass { 0 } else { 1 },
    })
}

/// Outcome of the enumerated algebraic property suite.
pub struct AlgebraOutcome {
    pub finite_traces: u64,
    pub lassos: u64,
    pub violations: Vec<String>,
}

/// Property-checks the semantic algebra over every enumerated trace of a
/// small space: weak-conjunction commutativity/associativity, the
/// guar(true) identity, the frameless/framed spec merge, prefix closure,
/// and eventually/always duality on lassos.
pub fn algebra_properties(params: &CheckParams) -> Result<AlgebraOutcome, String> {
    let values = params
        .values
        .clone()
        .unwrap_or_else(|| vec![Value::Null, Value::Int(1)]);
    let cap = params.seq_cap.unwrap_or(2);
    let max_len = params.max_len.unwrap_or(3);
    let decls = queue_decls(&values, cap, Value::Int(1), false);
    let space = StateSpace::new(decls).map_err(|e| e.to_string())?;

    let q1 = StateRelation::prefix_of("qu");
    let q2 = StateRelation::append_var("qu", "v");
    let a = Command::rely(StateRelation::suffix_of("qu"));
    let b = Command::guar(q1.clone());
    let c = Command::with("qu", Command::spec(Frame::of(&["qu"]), q2.clone()));
    let merged = Command::spec(Frame::of(&["qu"]), StateRelation::and(q1.clone(), q2.clone()));
    let split = Command::conj(
        Command::spec(Frame::All, q1.clone()),
        Command::spec(Frame::of(&["qu"]), q2.clone()),
    );
    let conj_ab = Command::conj(a.clone(), b.clone());
    let conj_ba = Command::conj(b.clone(), a.clone());
    let conj_ab_c = Command::conj(Command::conj(a.clone(), b.clone()), c.clone());
    let conj_a_bc = Command::conj(a.clone(), Command::conj(b.clone(), c.clone()));
    let guar_true = Command::conj(Command::guar(StateRelation::Universal), c.clone());

    let p = StatePredicate::non_empty("qu");
    let ev = TemporalFormula::eventually(TemporalFormula::atom(p.clone()));
    let not_ev = TemporalFormula::not(ev.clone());
    let alw_not = TemporalFormula::always(TemporalFormula::not(TemporalFormula::atom(p)));

    let mut violations = Vec::new();
    let mut finite_traces = 0u64;
    let kinds = [StepKind::Pgm, StepKind::Env];

    let traces = enumerate_traces(&space, max_len, &kinds, &StepFilters::none(), 5_000_000)
        .map_err(|e| e.to_string())?;
    for t in traces {
        let t = t.map_err(|e| e.to_string())?;
        finite_traces += 1;
        let v_ab = accepts(&conj_ab, &t, &space).map_err(|e| e.to_string())?;
        let v_ba = accepts(&conj_ba, &t, &space).map_err(|e| e.to_string())?;
        if v_ab != v_ba {
            violations.push(format!("conjunction not commutative on {}", format_trace(&t, space.decls())));
            break;
        }
        let v_abc = accepts(&conj_ab_c, &t, &space).map_err(|e| e.to_string())?;
        let v_a_bc = accepts(&conj_a_bc, &t, &space).map_err(|e| e.to_string())?;
        if v_abc != v_a_bc {
            violations.push("conjunction not associative".into());
            break;
        }
        let v_id = accepts(&guar_true, &t, &space).map_err(|e| e.to_string())?;
        let v_c = accepts(&c, &t, &space).map_err(|e| e.to_string())?;
        if v_id != v_c {
            violations.push("guar(true) is not an identity".into());
            break;
        }
        let v_merge = accepts(&merged, &t, &space).map_err(|e| e.to_string())?;
        let v_split = accepts(&split, &t, &space).map_err(|e| e.to_string())?;
        if v_merge != v_split {
            violations.push(format!(
                "spec merge broken on {}",
                format_trace(&t, space.decls())
            ));
            break;
        }
        // Prefix closure of acceptance.
        if v_c.is_accepted() && t.len() > 0 {
            let prefix = t.prefix(t.len() - 1);
            if !partial_accepts(&c, &prefix, &space).map_err(|e| e.to_string())? {
                violations.push("prefix closure violated".into());
                break;
            }
        }
    }

    let mut lassos = 0u64;
    if violations.is_empty() {
        let stream = enumerate_lassos(&space, max_len, &kinds, &StepFilters::none(), 5_000_000)
            .map_err(|e| e.to_string())?;
        for t in stream {
            let t = t.map_err(|e| e.to_string())?;
            lassos += 1;
            let ve = crate::temporal::eval_temporal(&not_ev, &t, space.decls())
                .map_err(|e| e.to_string())?;
            let va = crate::temporal::eval_temporal(&alw_not, &t, space.decls())
                .map_err(|e| e.to_string())?;
            if ve != va {
                violations.push("eventually/always duality violated".into());
                break;
            }
        }
    }

    Ok(AlgebraOutcome {
        finite_traces,
        lassos,
        violations,
    })
}

/// Replays a serialized counterexample trace through the refinement pairs
/// of a named check, returning `(sub, abstract verdict, concrete verdict)`
/// for every pair whose declarations can bind the trace.
pub fn replay(
    name: &str,
    params: &CheckParams,
    trace_text: &str,
) -> Result<Vec<(String, String, String)>, RegistryError> {
    let pairs = refine_pairs(name, params).ok_or_else(|| {
        RegistryError::BadConfig(format!("check `{name}` has no replayable refinement pairs"))
    })?;
    let mut out = Vec::new();
    for pair in pairs {
        let Ok(trace) = crate::traces::parse_trace(trace_text, &pair.cfg.decls) else {
            continue;
        };
        let space = StateSpace::new(pair.cfg.decls.clone())
            .map_err(|e| RegistryError::Run(e.to_string()))?;
        let Ok(av) = accepts(&pair.abs, &trace, &space) else {
            continue;
        };
        let cv = accepts(&pair.conc, &trace, &space)
            .map_err(|e| RegistryError::Run(e.to_string()))?;
        out.push((pair.sub, av.to_string(), cv.to_string()));
    }
    if out.is_empty() {
        return Err(RegistryError::Run(
            "the trace does not bind the declarations of any sub-check".into(),
        ));
    }
    Ok(out)
}

/// Syntactic path of the conjunct responsible for a rejected window.
fn failing_path(cmd: &Command, window: &OpWindow) -> String {
    StateSpace::new(window.decls.clone())
        .ok()
        .and_then(|space| crate::semantics::explain(cmd, &window.trace, &space).ok())
        .unwrap_or_else(|| "root".into())
}
