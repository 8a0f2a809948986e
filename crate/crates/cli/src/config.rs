//! JSON config files whose keys are long flag names.
//!
//! `--config file.json` is expanded into flags placed right after the
//! subcommand name. Flags given on the command line win over the file.

use std::ffi::OsString;
use std::fs;

use serde_json::Value;

pub const SUBCOMMANDS: [&str; 7] = ["gen-acm", "gen-block", "sample", "estimate", "experiment", "ingest", "stats"];

/// Returns `argv` with any `--config` option replaced by the flags it holds.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut args: Vec<String> = Vec::with_capacity(argv.len());
    for a in argv {
        args.push(a.into_string().map_err(|a| format!("argument {a:?} is not valid UTF-8"))?);
    }
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config needs a file path")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest.into_iter().map(OsString::from).collect());
    };

    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("config {path} must hold a JSON object"));
    };

    let given = |flag: &str| {
        rest.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
    };
    let mut injected = Vec::new();
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if given(&flag) {
            continue;
        }
        match value {
            Value::Bool(true) => injected.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                for item in items {
                    injected.push(flag.clone());
                    injected.push(scalar(&key, item)?);
                }
            }
            other => {
                injected.push(flag);
                injected.push(scalar(&key, other)?);
            }
        }
    }

    let at = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .map(|p| p + 1)
        .unwrap_or(rest.len());
    rest.splice(at..at, injected);
    Ok(rest.into_iter().map(OsString::from).collect())
}

fn scalar(key: &str, v: Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(format!("config key `{key}` must hold a scalar or a list of scalars")),
    }
}
