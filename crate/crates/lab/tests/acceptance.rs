//! Acceptance suite: every registered experiment at full size, one line per
//! criterion.
//!
//! `darling-kac` (A8) cannot meet its KS band at N = 1e6. The local time is
//! integer valued, so the empirical CDF jumps by P(Xi = 0) at zero while the
//! exponential CDF starts at 0; KS is therefore at least P(Xi = 0), which is
//! close to 1/(1 + g(N)) ~ 0.14 at this N. The band would need g(N) >= 9,
//! i.e. N around 5e8. The criterion is reported as FAIL and the run checks
//! instead that the failure is exactly this floor and that KS improves with N.

use std::process::ExitCode;

use anisowalk_lab::experiments::{registry, run_experiment};
use anisowalk_lab::outcome::ExperimentOutcome;
use anisowalk_lab::runner::Runner;

const SEED: u64 = 20_240_601;

/// Criteria whose headline check is known to fail at the prescribed size.
const UNATTAINABLE: &[&str] = &["A8"];

fn detail(outcome: &ExperimentOutcome) -> String {
    let failed: Vec<_> = outcome.failed_checks().collect();
    match failed.first() {
        None => {
            let c = &outcome.checks[0];
            format!("{} checks; first: {} = {:.6}", outcome.checks.len(), c.label, c.statistic)
        }
        Some(c) => format!(
            "{}/{} checks failed; first: {} = {:.6} (target {:.6}, tolerance {:.6})",
            failed.len(),
            outcome.checks.len(),
            c.label,
            c.statistic,
            c.target,
            c.tolerance
        ),
    }
}

/// The A8 failure must be the integer-atom floor, and the trend must hold.
fn darling_kac_explained(outcome: &ExperimentOutcome) -> Result<String, String> {
    let headline = &outcome.checks[0];
    let trend = &outcome.checks[1];
    if !trend.pass {
        return Err(format!("KS did not improve: {} -> {}", trend.target, trend.statistic));
    }
    let atom = outcome
        .series
        .iter()
        .find(|s| s.name == "zero-atom")
        .and_then(|s| s.points.last())
        .ok_or("zero-atom series missing")?
        .1;
    if headline.statistic + 1e-12 < atom {
        return Err(format!("KS {} below its floor {}", headline.statistic, atom));
    }
    if atom <= headline.tolerance {
        return Err(format!("atom {atom} no longer blocks the band; A8 should pass"));
    }
    Ok(format!(
        "KS {:.4} >= P(Xi=0) {:.4} > {:.2}; trend {:.4} -> {:.4}",
        headline.statistic, atom, headline.tolerance, trend.target, trend.statistic
    ))
}

fn main() -> ExitCode {
    let runner = Runner::new(None).expect("thread pool");
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    println!("acceptance suite, seed {SEED}, {} worker(s)", runner.jobs());
    for def in registry() {
        if seen.contains(&def.criterion) {
            problems.push(format!("{} registered twice", def.criterion));
        }
        seen.push(def.criterion);
        let spec = def.spec(SEED);
        let outcome = match run_experiment(&spec, &runner, true) {
            Ok(o) => o,
            Err(e) => {
                println!("{:<4} ERROR {:<20} {e}", def.criterion, def.name);
                problems.push(format!("{}: {e}", def.criterion));
                continue;
            }
        };
        let secs = outcome.wall_time_s.unwrap_or(0.0);
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{:<4} {verdict} {:<20} {:>7.1}s  {}", def.criterion, def.name, secs, detail(&outcome));
        if UNATTAINABLE.contains(&def.criterion) {
            if outcome.pass {
                println!("     note: {} now passes; drop it from the unattainable list", def.criterion);
            } else {
                match darling_kac_explained(&outcome) {
                    Ok(why) => println!("     known unattainable at this size: {why}"),
                    Err(e) => problems.push(format!("{}: {e}", def.criterion)),
                }
            }
        } else if !outcome.pass {
            problems.push(format!("{}: {}", def.criterion, detail(&outcome)));
        }
    }
    for i in 1..=13 {
        let c = format!("A{i}");
        if !seen.iter().any(|s| *s == c) {
            problems.push(format!("{c} has no experiment"));
        }
    }
    if problems.is_empty() {
        println!("acceptance: all criteria accounted for");
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            println!("problem: {p}");
        }
        ExitCode::FAILURE
    }
}
