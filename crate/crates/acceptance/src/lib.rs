//! Shared helpers for the acceptance suite in `tests/acceptance.rs`.
//!
//! Kept in its own package so that the acceptance binary runs after every
//! other test target of the workspace.

use std::io::Write;

use kuramoto_sync::runner::{self, RunOutput};
use kuramoto_sync::presets;

/// Prints `AC-n PASS|FAIL: detail` and returns `pass`.
///
/// Writes to the process stdout rather than through `println!`, which the
/// test harness captures for passing tests.
pub fn verdict(id: &str, pass: bool, detail: &str) -> bool {
    let line = format!("{id} {}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes()).and_then(|()| out.flush());
    pass
}

pub fn run_preset(name: &str) -> RunOutput {
    runner::run(&presets::load(name).unwrap()).unwrap()
}

/// Numeric report value; panics when the key is missing.
pub fn num(out: &RunOutput, key: &str) -> f64 {
    out.report
        .number(key)
        .unwrap_or_else(|| panic!("report has no numeric `{key}`"))
}
