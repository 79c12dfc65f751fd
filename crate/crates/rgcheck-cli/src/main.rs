//! Command-line front end: runs named checks, parses specification and
//! scenario files, replays counterexamples, and writes line-delimited
//! machine reports.
//!
//! Exit codes: 0 pass, 1 fail (counterexample), 2 usage or parse error,
//! 3 search budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rgcheck::casestudies::{check_invariant, explore, parse_scenario};
use rgcheck::dsl::{parse_command, print_command};
use rgcheck::kernel::lint;
use rgcheck::registry::{self, CheckParams};

#[derive(Parser, Debug)]
#[command(
    name = "rgcheck",
    about = "Bounded checking of rely/guarantee specification commands"
)]
struct Args {
    /// Run a named check from the registry.
    #[arg(long)]
    check: Option<String>,

    /// Plain key=value configuration file overriding check defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the trace length bound.
    #[arg(long)]
    max_len: Option<usize>,

    /// Override whether lasso traces are enumerated.
    #[arg(long)]
    lassos: Option<bool>,

    /// Append a line-delimited machine report record to this file.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Replay a serialized counterexample trace through the named check.
    #[arg(long)]
    replay: Option<PathBuf>,

    /// List the registered checks and exit.
    #[arg(long)]
    list: bool,

    /// Parse a specification file, lint it, and print its canonical form.
    #[arg(long)]
    parse: Option<PathBuf>,

    /// Explore a scenario file and summarize its runs.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

fn load_params(args: &Args) -> Result<CheckParams, String> {
    let mut params = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            CheckParams::parse(&text).map_err(|e| e.to_string())?
        }
        None => CheckParams::default(),
    };
    if args.max_len.is_some() {
        params.max_len = args.max_len;
    }
    if args.lassos.is_some() {
        params.lassos = args.lassos;
    }
    Ok(params)
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("run with --help for usage, or --list for the check registry");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = Args::parse();

    if args.list {
        for (name, about) in registry::list() {
            println!("{name:<34} {about}");
        }
        return ExitCode::SUCCESS;
    }

    if let Some(path) = &args.parse {
        return match fs::read_to_string(path) {
            Err(e) => usage_error(&format!("{}: {e}", path.display())),
            Ok(text) => match parse_command(&text) {
                Err(e) => usage_error(&e.to_string()),
                Ok(cmd) => {
                    println!("{}", print_command(&cmd));
                    // Lints need a declaration context; use the variables the
                    // command mentions over the default universe.
                    let decls = rgcheck::kernel::Decls::new(
                        cmd.vars()
                            .into_iter()
                            .map(|v| {
                                use rgcheck::kernel::{Value, VarDecl};
                                let name = v.to_string();
                                if name == "qu" || name == "s" {
                                    VarDecl::seq(name, vec![Value::Null, Value::Int(1), Value::Int(2)], 3)
                                } else {
                                    VarDecl::scalar(name, vec![Value::Null, Value::Int(1), Value::Int(2)])
                                }
                            })
                            .collect(),
                    );
                    match rgcheck::kernel::enumerate_states(&decls) {
                        Ok(states) => {
                            for l in lint(&cmd, &decls, &states).unwrap_or_default() {
                                eprintln!("warning: {l}");
                            }
                        }
                        Err(e) => eprintln!("warning: could not lint: {e}"),
                    }
                    ExitCode::SUCCESS
                }
            },
        };
    }

    if let Some(path) = &args.scenario {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return usage_error(&format!("{}: {e}", path.display())),
        };
        let scenario = match parse_scenario(&text) {
            Ok(s) => s,
            Err(e) => return usage_error(&e.to_string()),
        };
        let lts = match scenario.build() {
            Ok(l) => l,
            Err(e) => return usage_error(&e.to_string()),
        };
        let runs = match explore(&lts, &scenario.explore_config()) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
        };
        let lassos = runs.iter().filter(|r| r.loop_start.is_some()).count();
        let capped = runs.iter().filter(|r| r.capped).count();
        println!(
            "{} runs ({} complete, {} non-progressing cycles, {} depth-capped)",
            runs.len(),
            runs.len() - lassos - capped,
            lassos,
            capped
        );
        match check_invariant(&lts, &runs) {
            Ok(None) => println!("data-type invariant holds in every reachable state"),
            Ok(Some((ri, si))) => {
                println!("data-type invariant violated in run {ri} at step {si}");
                return ExitCode::FAILURE;
            }
            Err(e) => return usage_error(&e.to_string()),
        }
        return ExitCode::SUCCESS;
    }

    let Some(check) = &args.check else {
        return usage_error("nothing to do: pass --check <name>, --list, --parse or --scenario");
    };

    let params = match load_params(&args) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };

    if let Some(trace_path) = &args.replay {
        let text = match fs::read_to_string(trace_path) {
            Ok(t) => t,
            Err(e) => return usage_error(&format!("{}: {e}", trace_path.display())),
        };
        return match registry::replay(check, &params, &text) {
            Ok(results) => {
                for (sub, abs, conc) in results {
                    println!("{sub}: abstract {abs}; concrete {conc}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(&e.to_string()),
        };
    }

    let report = match registry::run_check(check, &params) {
        Ok(r) => r,
        Err(registry::RegistryError::UnknownCheck(name)) => {
            eprintln!("error: unknown check `{name}`; registered checks:");
            for (n, about) in registry::list() {
                eprintln!("  {n:<34} {about}");
            }
            return ExitCode::from(2);
        }
        Err(e) => return usage_error(&e.to_string()),
    };

    println!("{}", report.human());
    if let Some(cex) = &report.counterexample {
        print!("{cex}");
    }
    if let Some(path) = &args.report {
        let line = match serde_json::to_string(&report) {
            Ok(l) => l,
            Err(e) => return usage_error(&format!("report serialization: {e}")),
        };
        let existing = fs::read_to_string(path).unwrap_or_default();
        if let Err(e) = fs::write(path, format!("{existing}{line}\n")) {
            return usage_error(&format!("{}: {e}", path.display()));
        }
    }
    ExitCode::from(report.exit_code.clamp(0, 255) as u8)
}
