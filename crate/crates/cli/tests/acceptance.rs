//! Acceptance gate: every criterion at its full size range and trial count,
//! one PASS/FAIL line each. Run with `cargo test --test acceptance -- --nocapture`.

use std::process::Command;

use loglie_core::verify::{run_criterion, Bound, Report, VerifyConfig};

struct Criterion {
    id: u8,
    title: &'static str,
    n: (usize, usize),
    trials: usize,
}

const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, title: "chart round trips", n: (2, 8), trials: 100 },
    Criterion { id: 2, title: "group axioms", n: (2, 8), trials: 100 },
    Criterion { id: 3, title: "normaliser identities", n: (2, 8), trials: 50 },
    Criterion { id: 4, title: "metric split and degeneracy", n: (2, 8), trials: 200 },
    Criterion { id: 5, title: "tangent maps vs finite differences", n: (2, 5), trials: 30 },
    Criterion { id: 6, title: "integrated isometries", n: (2, 8), trials: 50 },
    Criterion { id: 7, title: "block embedding golden example", n: (2, 8), trials: 1 },
    Criterion { id: 8, title: "Helmert identities (n up to 10)", n: (2, 8), trials: 1 },
    Criterion { id: 9, title: "quotient identities", n: (2, 8), trials: 100 },
    Criterion { id: 10, title: "non-horizontality witness", n: (3, 6), trials: 50 },
    Criterion { id: 11, title: "normaliser uniqueness (multi-start)", n: (2, 8), trials: 50 },
];

/// Worst residual relative to its tolerance across a criterion's checks; lower
/// bounds use the reciprocal so that values below 1 always pass.
fn worst_ratio(report: &Report) -> f64 {
    report
        .checks
        .iter()
        .map(|c| match c.bound {
            Bound::Upper if c.tolerance > 0.0 => c.residual / c.tolerance,
            Bound::Upper => if c.residual > 0.0 { f64::INFINITY } else { 0.0 },
            Bound::Lower => c.tolerance / c.residual,
        })
        .fold(0.0, f64::max)
}

fn line(id: u8, title: &str, passed: bool, detail: &str) -> String {
    format!("criterion {id:>2} [{}] {title}: {detail}", if passed { "PASS" } else { "FAIL" })
}

fn library_criteria() -> Vec<(bool, String)> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|c| {
                scope.spawn(move || {
                    let cfg = VerifyConfig {
                        n_min: c.n.0,
                        n_max: c.n.1,
                        trials: c.trials,
                        seed: 0x5eed,
                        ..VerifyConfig::default()
                    };
                    let report = run_criterion(c.id, &cfg).expect("valid configuration");
                    for check in report.checks.iter().filter(|k| !k.passed()) {
                        eprintln!("  {check}");
                    }
                    let passed = report.passed();
                    let detail = format!(
                        "{} checks, n {}..{}, {} trials each, worst tolerance ratio {:.2e}",
                        report.checks.len(),
                        c.n.0,
                        c.n.1,
                        c.trials,
                        worst_ratio(&report)
                    );
                    (passed, line(c.id, c.title, passed, &detail))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    })
}

fn loglie(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_loglie"))
        .args(args)
        .env_remove("LOGLIE_SEED")
        .output()
        .expect("binary runs")
}

fn cli_determinism() -> (bool, String) {
    let args = ["verify", "--seed", "1234", "--output", "json"];
    let first = loglie(&args);
    let second = loglie(&args);
    let reproducible = first.status.code() == Some(0) && first.stdout == second.stdout;
    let control = loglie(&["verify", "--seed", "1234", "--tol-all", "1e-20"]);
    let rejected = matches!(control.status.code(), Some(c) if c != 0);
    let passed = reproducible && rejected;
    let detail = format!(
        "default verify exit {:?}, reruns byte-identical: {}, tolerance 1e-20 exit {:?}",
        first.status.code(),
        first.stdout == second.stdout,
        control.status.code()
    );
    (passed, line(12, "CLI determinism and negative control", passed, &detail))
}

#[test]
fn acceptance() {
    let mut results = library_criteria();
    results.push(cli_determinism());
    for (_, text) in &results {
        println!("{text}");
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.0).map(|r| r.1.as_str()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
