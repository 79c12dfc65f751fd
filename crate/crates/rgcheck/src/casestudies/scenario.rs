//! Scenario files: a declarative description of a closed system to explore.
//!
//! Format (one item per line, `#` comments):
//!
//! ```text
//! model = treiber | lockqueue
//! n = 2            # lockqueue capacity
//! values = 1 2     # non-null value universe
//! seq_cap = 3      # sequence length cap
//! max_len = 24     # exploration depth bound
//! thread: push 1; pop
//! thread: write 2
//! ```
//!
//! Each `thread:` line lists that thread's operations in order, `op` or
//! `op <value>`.

use thiserror::Error;

use crate::kernel::Value;

use super::lts::{
    lock_queue_impl, treiber_impl, ExploreConfig, Lts, LtsError, OpKind,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Lts(#[from] LtsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub model: String,
    pub n: usize,
    pub values: Vec<Value>,
    pub seq_cap: usize,
    pub max_len: usize,
    pub threads: Vec<Vec<(OpKind, Option<Value>)>>,
}

impl Scenario {
    pub fn build(&self) -> Result<Lts, ScenarioError> {
        let lts = match self.model.as_str() {
            "treiber" => treiber_impl(&self.threads, &self.values, self.seq_cap)?,
            "lockqueue" => lock_queue_impl(self.n, &self.threads, &self.values, self.seq_cap)?,
            other => {
                return Err(ScenarioError::Parse {
                    line: 0,
                    msg: format!("unknown model `{other}`"),
                })
            }
        };
        Ok(lts)
    }

    pub fn explore_config(&self) -> ExploreConfig {
        ExploreConfig {
            max_len: self.max_len,
            ..ExploreConfig::default()
        }
    }
}

fn parse_op(text: &str, line: usize) -> Result<(OpKind, Option<Value>), ScenarioError> {
    let mut parts = text.split_whitespace();
    let op = parts.next().ok_or_else(|| ScenarioError::Parse {
        line,
        msg: "empty operation".into(),
    })?;
    let kind = match op {
        "write" => OpKind::Write,
        "read" => OpKind::Read,
        "push" => OpKind::Push,
        "pop" => OpKind::Pop,
        other => {
            return Err(ScenarioError::Parse {
                line,
                msg: format!("unknown operation `{other}`"),
            })
        }
    };
    let arg = match parts.next() {
        None => None,
        Some("null") => Some(Value::Null),
        Some(n) => Some(Value::Int(n.parse::<i64>().map_err(|_| {
            ScenarioError::Parse {
                line,
                msg: format!("bad argument `{n}`"),
            }
        })?)),
    };
    if parts.next().is_some() {
        return Err(ScenarioError::Parse {
            line,
            msg: "too many tokens in operation".into(),
        });
    }
    Ok((kind, arg))
}

/// Parses the canonical scenario text format.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut model = None;
    let mut n = 2usize;
    let mut values = vec![Value::Int(1), Value::Int(2)];
    let mut seq_cap = 3usize;
    let mut max_len = 24usize;
    let mut threads = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let ln = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("thread:") {
            let ops = rest
                .split(';')
                .map(|p| parse_op(p.trim(), ln))
                .collect::<Result<Vec<_>, _>>()?;
            threads.push(ops);
        } else if let Some((key, val)) = line.split_once('=') {
            let key = key.trim();
            let val = val.trim();
            match key {
                "model" => model = Some(val.to_string()),
                "n" => {
                    n = val.parse().map_err(|_| ScenarioError::Parse {
                        line: ln,
                        msg: "bad n".into(),
                    })?
                }
                "seq_cap" => {
                    seq_cap = val.parse().map_err(|_| ScenarioError::Parse {
                        line: ln,
                        msg: "bad seq_cap".into(),
                    })?
                }
                "max_len" => {
                    max_len = val.parse().map_err(|_| ScenarioError::Parse {
                        line: ln,
                        msg: "bad max_len".into(),
                    })?
                }
                "values" => {
                    values = val
                        .split_whitespace()
                        .map(|t| {
                            if t == "null" {
                                Ok(Value::Null)
                            } else {
                                t.parse::<i64>().map(Value::Int).map_err(|_| {
                                    ScenarioError::Parse {
                                        line: ln,
                                        msg: format!("bad value `{t}`"),
                                    }
                                })
                            }
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                }
                other => {
                    return Err(ScenarioError::Parse {
                        line: ln,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        } else {
            return Err(ScenarioError::Parse {
                line: ln,
                msg: format!("expected `key = value` or `thread:`, got `{line}`"),
            });
        }
    }
    let model = model.ok_or(ScenarioError::Parse {
        line: 0,
        msg: "missing `model =` line".into(),
    })?;
    Ok(Scenario {
        model,
        n,
        values,
        seq_cap,
        max_len,
        threads,
    })
}
