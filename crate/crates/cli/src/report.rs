//! Run reports: named assertions with budgets, deterministic results, and
//! input digests.  The `results` block depends only on the configuration
//! and seed — timings live outside it so repeated runs stay byte-identical.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// One named check: `pass` is `lhs <= rhs` for upper bounds, `lhs >= rhs`
/// for lower bounds (the direction is baked in at creation).
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
    pub inputs: Vec<Value>,
    pub results: BTreeMap<String, Value>,
    pub assertions: Vec<Assertion>,
    pub timings: BTreeMap<String, Value>,
}

/// Accumulates a report while a command runs.
pub struct Reporter {
    command: String,
    seed: u64,
    tol_scale: f64,
    params: BTreeMap<String, Value>,
    inputs: Vec<Value>,
    results: BTreeMap<String, Value>,
    assertions: Vec<Assertion>,
    csv: Option<String>,
    started: Instant,
}

/// FNV-1a 64-bit digest of a byte stream.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Reporter {
    pub fn new(command: &str, seed: u64, tol_scale: f64) -> Self {
        Reporter {
            command: command.to_string(),
            seed,
            tol_scale,
            params: BTreeMap::new(),
            inputs: Vec::new(),
            results: BTreeMap::new(),
            assertions: Vec::new(),
            csv: None,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    /// Records an input file with its FNV-1a digest.
    pub fn input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)
            .with_context(|| format!("cannot read input {}", path.display()))?;
        self.inputs.push(serde_json::json!({
            "path": path.display().to_string(),
            "fnv1a64": format!("{:016x}", fnv1a64(&bytes)),
        }));
        Ok(())
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    /// Upper-bound check: `measured <= budget * tol_scale`.
    pub fn check_upper(&mut self, name: &str, measured: f64, budget: f64) -> bool {
        let rhs = budget * self.tol_scale;
        let pass = measured <= rhs;
        self.assertions.push(Assertion { name: name.into(), lhs: measured, rhs, pass });
        pass
    }

    /// Lower-bound check: `measured >= floor * tol_scale`.
    pub fn check_lower(&mut self, name: &str, measured: f64, floor: f64) -> bool {
        let rhs = floor * self.tol_scale;
        let pass = measured >= rhs;
        self.assertions.push(Assertion { name: name.into(), lhs: measured, rhs, pass });
        pass
    }

    /// Boolean check, recorded as 1.0-vs-0.5.
    pub fn check_flag(&mut self, name: &str, ok: bool) -> bool {
        self.assertions.push(Assertion {
            name: name.into(),
            lhs: if ok { 1.0 } else { 0.0 },
            rhs: 0.5,
            pass: ok,
        });
        ok
    }

    /// Imports a pre-built assertion (e.g. from a gallery check).
    pub fn push_assertion(&mut self, name: &str, lhs: f64, rhs: f64, pass: bool) {
        self.assertions.push(Assertion { name: name.into(), lhs, rhs, pass });
    }

    /// Attaches tabular output for `--csv`.
    pub fn set_csv(&mut self, text: String) {
        self.csv = Some(text);
    }

    /// Finishes the run: prints the human summary, writes `--json`/`--csv`
    /// outputs, and returns the process exit code (0 pass, 1 any assertion
    /// failed).
    pub fn finish(self, json_out: Option<&Path>, csv_out: Option<&Path>) -> Result<i32> {
        let failing: Vec<String> = self
            .assertions
            .iter()
            .filter(|a| !a.pass)
            .map(|a| a.name.clone())
            .collect();

        let mut timings = BTreeMap::new();
        let elapsed = self.started.elapsed().as_secs_f64();
        timings.insert(
            "total_s".to_string(),
            serde_json::json!((elapsed * 1e6).round() / 1e6),
        );

        let report = Report {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            seed: self.seed,
            params: self.params,
            inputs: self.inputs,
            results: self.results,
            assertions: self.assertions,
            timings,
        };

        // human-readable summary on stdout
        let mut out = std::io::stdout().lock();
        writeln!(out, "command: {}  (seed {})", report.command, report.seed)?;
        for (key, value) in &report.results {
            writeln!(out, "  {key} = {value}")?;
        }
        for a in &report.assertions {
            writeln!(
                out,
                "  [{}] {}: {:.6e} vs {:.6e}",
                if a.pass { "PASS" } else { "FAIL" },
                a.name,
                a.lhs,
                a.rhs
            )?;
        }

        if let Some(path) = json_out {
            let text = serde_json::to_string_pretty(&report)?;
            std::fs::write(path, text + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        if let Some(path) = csv_out {
            match &self.csv {
                Some(text) => std::fs::write(path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => anyhow::bail!(
                    "--csv is not supported for command '{}' (no tabular output)",
                    report.command
                ),
            }
        }

        if failing.is_empty() {
            Ok(0)
        } else {
            eprintln!("failed assertions: {}", failing.join(", "));
            Ok(1)
        }
    }
}
