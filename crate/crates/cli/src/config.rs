//! Optional key=value config file; every key names a long flag, and flags on the command line
//! take precedence.

use std::fs;

use crate::error::CliError;

/// Flags that take no value; `key = true` turns them on.
const SWITCHES: [&str; 3] = ["csv", "timing", "inverse"];

fn has_flag(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefixed = format!("--{key}=");
    argv.iter().any(|a| *a == flag || a.starts_with(&prefixed))
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() || k == "config" {
            return Err(CliError::Usage(format!("config line {}: invalid key {k:?}", i + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Appends the config file's settings for every flag not already given.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let mut out = argv;
    for (k, v) in parse_config(&text)? {
        if has_flag(&out, &k) {
            continue;
        }
        if SWITCHES.contains(&k.as_str()) {
            match v.as_str() {
                "true" => out.push(format!("--{k}")),
                "false" => {}
                _ => return Err(CliError::Usage(format!("config key {k} expects true or false"))),
            }
        } else {
            out.push(format!("--{k}={v}"));
        }
    }
    Ok(out)
}
