//! Rendering of command results. Floats are written with 17 significant
//! digits so every value round-trips exactly.

use std::fmt::Write as _;
use std::str::FromStr;

use loglie_core::verify::{Bound, Report};
use loglie_core::SymMat;
use serde_json::{json, Map, Number, Value};

use crate::args::OutputFormat;

/// Pairwise distance preservation across a map.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCheck {
    pub pairs: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl DistanceCheck {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Mean {
        chart: &'static str,
        mean: SymMat<f64>,
        variance: f64,
    },
    Geodesic {
        chart: &'static str,
        points: Vec<(f64, SymMat<f64>)>,
    },
    Dist {
        chart: &'static str,
        distance: f64,
    },
    Map {
        from: &'static str,
        to: &'static str,
        matrices: Vec<SymMat<f64>>,
        check: Option<DistanceCheck>,
    },
    Verify {
        seed: u64,
        n: (usize, usize),
        trials: usize,
        report: Report,
    },
}

impl Output {
    /// Whether the command's own checks passed.
    pub fn passed(&self) -> bool {
        match self {
            Output::Map { check: Some(c), .. } => c.passed(),
            Output::Verify { report, .. } => report.passed(),
            _ => true,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values are finite or null");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Pretty => self.to_pretty(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Output::Mean { chart, mean, variance } => json!({
                "command": "mean",
                "chart": chart,
                "n": mean.n(),
                "mean": matrix(mean),
                "variance": num(*variance),
            }),
            Output::Geodesic { chart, points } => json!({
                "command": "geodesic",
                "chart": chart,
                "points": points
                    .iter()
                    .map(|(t, m)| json!({ "t": num(*t), "matrix": matrix(m) }))
                    .collect::<Vec<_>>(),
            }),
            Output::Dist { chart, distance } => json!({
                "command": "dist",
                "chart": chart,
                "distance": num(*distance),
            }),
            Output::Map { from, to, matrices, check } => json!({
                "command": "map",
                "from": from,
                "to": to,
                "matrices": matrices.iter().map(matrix).collect::<Vec<_>>(),
                "distance_check": check.as_ref().map(|c| json!({
                    "pairs": c.pairs,
                    "max_residual": num(c.max_residual),
                    "tolerance": num(c.tolerance),
                    "passed": c.passed(),
                })),
            }),
            Output::Verify { seed, n, trials, report } => {
                let checks: Vec<Value> = report
                    .checks
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        m.insert("criterion".into(), json!(c.criterion));
                        m.insert("name".into(), json!(c.name));
                        m.insert("bound".into(), json!(bound(c.bound)));
                        m.insert("residual".into(), num(c.residual));
                        m.insert("tolerance".into(), num(c.tolerance));
                        m.insert("trials".into(), json!(c.trials));
                        m.insert("passed".into(), json!(c.passed()));
                        m.insert("error".into(), json!(c.error));
                        Value::Object(m)
                    })
                    .collect();
                json!({
                    "command": "verify",
                    "seed": seed,
                    "n_min": n.0,
                    "n_max": n.1,
                    "trials": trials,
                    "passed": report.passed(),
                    "checks": checks,
                })
            }
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Mean { mean, variance, .. } => {
                csv_matrix(&mut out, mean);
                let _ = writeln!(out, "\nvariance,{}", fmt(*variance));
            }
            Output::Geodesic { points, .. } => {
                for (k, (t, m)) in points.iter().enumerate() {
                    if k > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "t,{}", fmt(*t));
                    csv_matrix(&mut out, m);
                }
            }
            Output::Dist { distance, .. } => {
                let _ = writeln!(out, "{}", fmt(*distance));
            }
            Output::Map { matrices, .. } => {
                for (k, m) in matrices.iter().enumerate() {
                    if k > 0 {
                        out.push('\n');
                    }
                    csv_matrix(&mut out, m);
                }
            }
            Output::Verify { report, .. } => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let _ = w.write_record([
                    "criterion", "name", "bound", "residual", "tolerance", "trials", "passed", "error",
                ]);
                for c in &report.checks {
                    let _ = w.write_record([
                        c.criterion.to_string(),
                        c.name.clone(),
                        bound(c.bound).to_string(),
                        fmt(c.residual),
                        fmt(c.tolerance),
                        c.trials.to_string(),
                        c.passed().to_string(),
                        c.error.clone().unwrap_or_default(),
                    ]);
                }
                let bytes = w.into_inner().expect("writing to memory cannot fail");
                out.push_str(&String::from_utf8(bytes).expect("records are utf-8"));
            }
        }
        out
    }

    fn to_pretty(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Mean { chart, mean, variance } => {
                let _ = writeln!(out, "log-Euclidean mean ({chart}):");
                pretty_matrix(&mut out, mean);
                let _ = writeln!(out, "variance: {variance:.10}");
            }
            Output::Geodesic { chart, points } => {
                for (t, m) in points {
                    let _ = writeln!(out, "geodesic ({chart}) at t = {t}:");
                    pretty_matrix(&mut out, m);
                }
            }
            Output::Dist { chart, distance } => {
                let _ = writeln!(out, "distance ({chart}): {distance:.12}");
            }
            Output::Map { from, to, matrices, check } => {
                for (k, m) in matrices.iter().enumerate() {
                    let _ = writeln!(out, "{from} -> {to}, matrix {k}:");
                    pretty_matrix(&mut out, m);
                }
                if let Some(c) = check {
                    let _ = writeln!(
                        out,
                        "distance preservation over {} pairs: {:.3e} (tolerance {:.1e}) {}",
                        c.pairs,
                        c.max_residual,
                        c.tolerance,
                        if c.passed() { "PASS" } else { "FAIL" }
                    );
                }
            }
            Output::Verify { seed, n, trials, report } => {
                let _ = writeln!(out, "verify: seed {seed}, n {}..{}, {trials} trials", n.0, n.1);
                for c in &report.checks {
                    let _ = writeln!(out, "{c}");
                }
                let _ = writeln!(out, "{}", if report.passed() { "ALL PASS" } else { "FAILED" });
            }
        }
        out
    }
}

/// Seventeen significant digits in scientific notation.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt(x)).expect("scientific notation is valid JSON"))
    } else {
        Value::Null
    }
}

fn matrix(m: &SymMat<f64>) -> Value {
    Value::Array(
        (0..m.n())
            .map(|i| Value::Array((0..m.n()).map(|j| num(m.get(i, j))).collect()))
            .collect(),
    )
}

fn bound(b: Bound) -> &'static str {
    match b {
        Bound::Upper => "upper",
        Bound::Lower => "lower",
    }
}

fn csv_matrix(out: &mut String, m: &SymMat<f64>) {
    for i in 0..m.n() {
        let row: Vec<String> = (0..m.n()).map(|j| fmt(m.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
}

fn pretty_matrix(out: &mut String, m: &SymMat<f64>) {
    for i in 0..m.n() {
        for j in 0..m.n() {
            let _ = write!(out, "{:>16.10}", m.get(i, j));
        }
        out.push('\n');
    }
}
