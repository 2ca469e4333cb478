//! Acceptance criteria, one PASS/FAIL line each. Criteria backed by a CLI
//! command also run the binary and compare its output.

use std::process::Command;

use imset::verify::{check_names, run_check, Suite, CONFIGURATION_N4_DESCENDING};
use serde_json::Value;

fn kit(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_imset-kit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn kit_json(args: &[&str]) -> Result<Value, String> {
    let out = kit(args)?;
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn markov_counts(v: &Value) -> Vec<(String, u64)> {
    v["per_degree_counts"]
        .as_object()
        .map(|m| m.iter().map(|(k, c)| (k.clone(), c.as_u64().unwrap_or(0))).collect())
        .unwrap_or_default()
}

/// Extra checks through the binary for criteria with a CLI form.
fn binary_check(id: usize) -> Result<(), String> {
    let expect = |pairs: &[(&str, u64)]| pairs.iter().map(|(d, c)| (d.to_string(), *c)).collect::<Vec<_>>();
    match id {
        2 => {
            let out = kit(&["config", "--n", "4", "--format", "csv", "--orientation", "table"])?;
            let text = String::from_utf8_lossy(&out.stdout);
            (out.status.success() && text == CONFIGURATION_N4_DESCENDING)
                .then_some(())
                .ok_or_else(|| "binary output differs from the golden table".into())
        }
        11 => {
            let v = kit_json(&["markov", "--n", "4", "--degree-cap", "4"])?;
            let ok = markov_counts(&v) == expect(&[("2", 2), ("3", 1), ("4", 4)]) && v["complete"] == true;
            ok.then_some(()).ok_or_else(|| format!("binary reported {v}"))
        }
        12 => {
            let v = kit_json(&["markov", "--n", "5", "--degree-cap", "4"])?;
            let ok = markov_counts(&v) == expect(&[("2", 3), ("3", 2), ("4", 11)]);
            ok.then_some(()).ok_or_else(|| format!("binary reported {}", v["per_degree_counts"]))
        }
        _ => Ok(()),
    }
}

fn main() {
    let mut failures = 0;
    for (id, _) in check_names() {
        let mut outcome = run_check(id, Suite::All).expect("known id");
        if let Err(e) = binary_check(id) {
            outcome.passed = false;
            outcome.detail = format!("{}; binary: {e}", outcome.detail);
        }
        println!(
            "{} criterion {:>2} {} ({:.1}s): {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            id,
            outcome.name,
            outcome.seconds,
            outcome.detail
        );
        failures += usize::from(!outcome.passed);
    }
    println!("{} of 15 criteria passed", 15 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
