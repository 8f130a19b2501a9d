//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criterion 1 compares against a literal enumerator whose top weight (36)
//! is inconsistent with its own closed-form distribution (40). It is run
//! faithfully and expected to fail; its consistency line must still pass.

use std::process::ExitCode;

use fewweight::suite::{self, CriterionResult, Status};
use fewweight::Ctx;

const KNOWN_UNATTAINABLE: &[u8] = &[1];

fn main() -> ExitCode {
    let results = suite::run(&Ctx::default(), &[], |r| {
        println!("{} criterion {}: {} ({:.2}s)", r.status, r.id, r.title, r.seconds);
        for line in &r.lines {
            if line.status != Status::Pass {
                println!("    {} {}: {}", line.status, line.name, line.detail);
            }
        }
    });
    match check(&results) {
        Ok(()) => {
            println!("acceptance: ok");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("acceptance: {e}");
            ExitCode::FAILURE
        }
    }
}

fn check(results: &[CriterionResult]) -> Result<(), String> {
    ensure(results.len() == 12, format!("{} criteria ran", results.len()))?;

    let unexpected: Vec<u8> = results
        .iter()
        .filter(|r| r.status == Status::Fail && !KNOWN_UNATTAINABLE.contains(&r.id))
        .map(|r| r.id)
        .collect();
    ensure(unexpected.is_empty(), format!("criteria failed: {unexpected:?}"))?;

    // The known failure is the literal only: parameters and the closed-form
    // distribution agree with the computation.
    let first = &results[0];
    let fails: Vec<&str> = first.failures().map(|l| l.name.as_str()).collect();
    ensure(
        fails.iter().all(|n| n.contains("enumerator")),
        format!("criterion 1 failed beyond the literal: {fails:?}"),
    )?;
    ensure(
        first.lines.iter().any(|l| l.name.contains("equals T1") && l.status == Status::Pass),
        "criterion 1 does not match T1",
    )?;

    let observations = &results[11];
    ensure(
        !observations.lines.is_empty()
            && observations.lines.iter().all(|l| l.status == Status::Observation),
        "criterion 12 did not record observations",
    )
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}
