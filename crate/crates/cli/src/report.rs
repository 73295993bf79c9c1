use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context as _, Result};
use serde_json::{json, Map, Value};

use crate::schema::{field, opt, parse_err, schema_err, uint};
use crate::tasks::{run_task, Context, Verdict, TASKS};

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub seed: Option<u64>,
    pub timestamp: bool,
}

pub struct Report {
    pub verdict: Verdict,
    pub value: Value,
}

/// A scenario, or a previous report whose echoed inputs are re-run.
fn scenario_of(v: Value) -> Value {
    match v.get("inputs") {
        Some(inputs) if v.get("verdict").is_some() && inputs.is_object() => inputs.clone(),
        _ => v,
    }
}

/// Runs a scenario; `expected` is the subcommand's task, if any.
/// Group files are resolved against `base`.
pub fn run_value(
    raw: Value,
    expected: Option<&str>,
    base: Option<&Path>,
    ov: &Overrides,
) -> Report {
    let raw = scenario_of(raw);
    let mut echo = raw.clone();
    let task = raw
        .get("task")
        .and_then(|t| t.as_str())
        .map(String::from)
        .or(expected.map(String::from));
    let result = (|| -> Result<(String, String, u64, u64, crate::tasks::Outcome)> {
        if !raw.is_object() {
            return Err(parse_err("scenario", "expected a JSON object"));
        }
        let task = task
            .clone()
            .ok_or_else(|| parse_err("task", "missing field"))?;
        if !TASKS.contains(&task.as_str()) {
            return Err(schema_err(format!("unknown task {task:?}")));
        }
        if let Some(e) = expected {
            if e != task {
                return Err(schema_err(format!(
                    "scenario task {task:?} does not match subcommand {e:?}"
                )));
            }
        }
        let (ga, name) = crate::schema::group(field(&raw, "group", "")?, "group", base)?;
        let p = match (ov.prime, opt(&raw, "prime")) {
            (Some(p), _) => p,
            (None, Some(p)) => uint(p, "prime")?,
            (None, None) => return Err(parse_err("prime", "missing field (or pass --prime)")),
        };
        if !is_prime(p) {
            return Err(parse_err("prime", format!("{p} is not prime")));
        }
        let seed = match (ov.seed, opt(&raw, "seed")) {
            (Some(s), _) => s,
            (None, Some(s)) => uint(s, "seed")?,
            (None, None) => 0,
        };
        let payload = raw.get("payload").cloned().unwrap_or_else(|| json!({}));
        let out = run_task(&task, &Context { ga, p, seed }, &payload)?;
        Ok((task, name, p, seed, out))
    })();
    let mut value = Map::new();
    let verdict = match result {
        Ok((task, name, p, seed, out)) => {
            if let Some(o) = echo.as_object_mut() {
                o.insert("task".into(), json!(task));
                o.insert("prime".into(), json!(p));
                o.insert("seed".into(), json!(seed));
            }
            value.insert("task".into(), json!(task));
            value.insert("group".into(), json!(name));
            value.insert("prime".into(), json!(p));
            value.insert("seed".into(), json!(seed));
            value.insert("verdict".into(), json!(out.verdict.label()));
            value.insert("flags".into(), Value::Object(out.flags));
            value.insert("outputs".into(), out.outputs);
            out.verdict
        }
        Err(e) => {
            value.insert("task".into(), task.map_or(Value::Null, Value::String));
            value.insert("verdict".into(), json!("ERROR"));
            value.insert("error".into(), json!(format!("{e:#}")));
            Verdict::Error
        }
    };
    value.insert("inputs".into(), echo);
    if ov.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        value.insert("timestamp".into(), json!(secs));
    }
    Report {
        verdict,
        value: Value::Object(value),
    }
}

pub fn run_file(path: &Path, expected: Option<&str>, ov: &Overrides) -> Report {
    let parsed = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .and_then(|s| {
            serde_json::from_str::<Value>(&s).map_err(|e| {
                parse_err(
                    &path.display().to_string(),
                    format!("line {} column {}: {e}", e.line(), e.column()),
                )
            })
        });
    match parsed {
        Ok(v) => run_value(v, expected, path.parent(), ov),
        Err(e) => Report {
            verdict: Verdict::Error,
            value: json!({ "task": expected, "verdict": "ERROR", "error": format!("{e:#}"), "inputs": Value::Null }),
        },
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("m") && m.contains_key("coeffs") => {
            let cs: Vec<String> = m["coeffs"]
                .as_array()
                .into_iter()
                .flatten()
                .map(text_value)
                .collect();
            format!("ζ{}[{}]", m["m"], cs.join(", "))
        }
        Value::Object(m) if m.len() == 1 && m.contains_key("coeffs") => {
            let terms: Vec<String> = m["coeffs"]
                .as_object()
                .into_iter()
                .flatten()
                .map(|(g, c)| format!("({})·g{g}", text_value(c)))
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
        other => other.to_string(),
    }
}

fn text_lines(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) if !(m.contains_key("coeffs")) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                text_lines(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(text_value).collect();
            let _ = writeln!(out, "{prefix}: [{}]", items.join(", "));
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", text_value(other));
        }
    }
}

/// Human-readable rendering; the echoed inputs are left to the JSON form.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            if k != "inputs" {
                text_lines(k, x, &mut out);
            }
        }
    }
    out
}

pub fn summary_counts(verdicts: &[Verdict]) -> Value {
    let count = |v: Verdict| verdicts.iter().filter(|&&x| x == v).count();
    json!({
        "total": verdicts.len(),
        "pass": count(Verdict::Pass),
        "fail": count(Verdict::Fail),
        "inconclusive": count(Verdict::Inconclusive),
        "error": count(Verdict::Error),
    })
}
