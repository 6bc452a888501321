//! Small parsers shared by the command line and the key=value config files.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

/// Parses one complex number: `1.5`, `-2i`, `1+2i`, `3.0-0.5i`.
pub fn complex(text: &str) -> Result<Complex64> {
    let trimmed = text.trim();
    trimmed
        .parse::<Complex64>()
        .with_context(|| format!("cannot parse complex number '{trimmed}' (use forms like 1.5, 2i, 1+2i)"))
}

/// Comma-separated complex numbers.
pub fn complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(complex).collect()
}

/// Comma-separated reals.
pub fn real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("cannot parse number '{}'", t.trim()))
        })
        .collect()
}

/// Comma-separated sizes.
pub fn usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("cannot parse size '{}'", t.trim()))
        })
        .collect()
}

/// Inclusive range `a..b`.
pub fn block_range(text: &str) -> Result<(usize, usize)> {
    let Some((lo, hi)) = text.split_once("..") else {
        bail!("expected an inclusive range like 2..12, got '{text}'");
    };
    let lo: usize = lo.trim().parse().with_context(|| format!("bad range start '{lo}'"))?;
    let hi: usize = hi.trim().parse().with_context(|| format!("bad range end '{hi}'"))?;
    if hi < lo {
        bail!("range end {hi} below start {lo}");
    }
    Ok((lo, hi))
}

/// Reads a line-based `key = value` config file ('#' starts a comment) and
/// rebuilds the corresponding command line.  The `command` key selects the
/// subcommand (it may contain spaces for nested commands, e.g. `zoo run`);
/// `seed`, `tol-scale`, `json`, and `csv` become global flags; every other
/// key becomes `--key value` for the subcommand.
pub fn config_to_argv(text: &str) -> Result<Vec<String>> {
    let mut command: Option<String> = None;
    let mut globals: Vec<(String, String)> = Vec::new();
    let mut options: Vec<(String, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key = value, got '{line}'", lineno + 1);
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if value.is_empty() {
            bail!("config line {}: empty value for '{key}'", lineno + 1);
        }
        match key.as_str() {
            "command" => command = Some(value),
            "config" => bail!("config line {}: config files cannot nest", lineno + 1),
            "seed" | "tol-scale" | "json" | "csv" => globals.push((key, value)),
            _ => options.push((key, value)),
        }
    }

    let command = command.context("config file must set 'command'")?;
    let mut argv = vec!["polyops".to_string()];
    for (k, v) in globals {
        argv.push(format!("--{k}"));
        argv.push(v);
    }
    for part in command.split_whitespace() {
        argv.push(part.to_string());
    }
    for (k, v) in options {
        argv.push(format!("--{k}"));
        argv.push(v);
    }
    Ok(argv)
}
