//! `key=value` configuration files merged beneath command-line flags.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// One `key=value` entry; `key` is a long flag name without dashes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Parses a config file. Blank lines and lines starting with `#` are skipped.
pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key=value, got `{line}`", i + 1);
        };
        let key = k.trim().trim_start_matches("--").to_string();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            bail!("line {}: bad key `{}`", i + 1, k.trim());
        }
        out.push(Entry { key: key.replace('_', "-"), value: v.trim().to_string(), line: i + 1 });
    }
    Ok(out)
}

/// Path given by `--config <path>` or `--config=<path>`, if any.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
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

fn has_flag(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| *a == long || a.starts_with(&eq))
}

/// Appends every config entry whose flag is absent from `args`, so that
/// flags on the command line win. A value of `true` becomes a bare switch.
pub fn merge(args: &[String], entries: &[Entry]) -> Vec<String> {
    let mut out = args.to_vec();
    for e in entries {
        if e.key == "config" || has_flag(args, &e.key) {
            continue;
        }
        out.push(format!("--{}", e.key));
        if e.value != "true" {
            out.push(e.value.clone());
        }
    }
    out
}

/// Reads the config named in `args`, if any, and merges it.
pub fn apply(args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let text = fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config `{path}`"))?;
    let entries = parse(&text).with_context(|| format!("in config `{path}`"))?;
    Ok(merge(&args, &entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn flags_override_file_values() {
        let entries = parse("# grid\nseed = 3\nvoa=ising\n\nmax_weight=9\n").unwrap();
        let merged = merge(&args("bimod --seed 5 quotient-dim"), &entries);
        assert_eq!(merged, args("bimod --seed 5 quotient-dim --voa ising --max-weight 9"));
    }

    #[test]
    fn equals_form_counts_as_present() {
        let entries = parse("voa=ising").unwrap();
        assert_eq!(merge(&args("bimod --voa=heisenberg verify"), &entries), args("bimod --voa=heisenberg verify"));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(parse("seed 3").is_err());
        assert!(parse("=3").is_err());
        assert!(parse("se ed=3").is_err());
    }

    #[test]
    fn true_values_become_switches() {
        let entries = parse("json=true").unwrap();
        assert_eq!(merge(&args("bimod verify"), &entries), args("bimod verify --json"));
    }

    #[test]
    fn finds_config_path_in_both_spellings() {
        assert_eq!(config_path(&args("bimod --config a.cfg verify")), Some("a.cfg".into()));
        assert_eq!(config_path(&args("bimod verify --config=b.cfg")), Some("b.cfg".into()));
        assert_eq!(config_path(&args("bimod verify")), None);
    }
}
