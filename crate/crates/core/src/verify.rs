//! Seeded property suite certifying the library's identities in double
//! precision. Every check reduces to "residual ≤ tolerance" except the
//! non-horizontality witness, which needs a residual strictly above its
//! threshold.
//!
//! Trial inputs are drawn from [`CounterRng::stream`] keyed by
//! `(criterion, n, check)`, so any subset of checks reproduces exactly.

use std::fmt;

use crate::corr::{LogScalingChart, OffLogChart};
use crate::error::{Error, Result};
use crate::group::LeChart;
use crate::isometries::{phi_ls, phi_ol, phi_ol_to_ls, psi_ol, psi_ol_inv, Helmert};
use crate::quotient::{
    canonical_section, correlation_section, dist_q, horizontal_lift, project, section_metrics,
};
use crate::sample::{
    random_corr, random_diag, random_hollow, random_in, random_positive, random_spd, random_sym,
    CounterRng,
};
use crate::scalers::{solve_d, solve_d_from, solve_dstar, solve_dstar_from, SolverConfig};
use crate::spd::{g_dl_ambient, g_le, g_ol_ambient, SpdChart};
use crate::symlin::{dexp, dlog, mat_exp, mat_log, Mat, Subspace, SymMat};

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=11;

/// Scale of the random symmetric generators behind sampled points.
const POINT_SCALE: f64 = 0.5;
/// Step of the five-point central difference.
const FD_STEP: f64 = 1e-4;
/// Random restarts per uniqueness trial.
const RESTARTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n_min: usize,
    pub n_max: usize,
    /// Trials per check and per matrix size.
    pub trials: usize,
    pub seed: u64,
    /// Replaces every upper-bound tolerance.
    pub tol_all: Option<f64>,
    /// Replaces the isometry tolerance.
    pub tol_iso: Option<f64>,
    pub solver: SolverConfig<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_min: 2,
            n_max: 6,
            trials: 50,
            seed: 0,
            tol_all: None,
            tol_iso: None,
            solver: SolverConfig::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max || self.trials == 0 {
            return Err(Error::InvalidConfig(format!(
                "verify needs 2 <= n_min <= n_max and trials >= 1 (got {}..{}, {})",
                self.n_min, self.n_max, self.trials
            )));
        }
        for t in [self.tol_all, self.tol_iso].into_iter().flatten() {
            if !(t >= 0.0) {
                return Err(Error::InvalidConfig(format!("tolerance {t} must be >= 0")));
            }
        }
        self.solver.validate()
    }

    fn sizes(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    fn rng(&self, criterion: u8, n: usize, check: u64) -> CounterRng {
        CounterRng::stream(self.seed, (criterion as u64) << 40 | (n as u64) << 20 | check)
    }
}

/// Whether a check bounds its residual from above or from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub criterion: u8,
    pub bound: Bound,
    /// Worst residual (largest for upper bounds, smallest for lower bounds).
    pub residual: f64,
    pub tolerance: f64,
    pub trials: usize,
    /// First solver or membership error met, if any; such a trial fails.
    pub error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && match self.bound {
                Bound::Upper => self.residual <= self.tolerance,
                Bound::Lower => self.residual > self.tolerance,
            }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::Upper => "<=",
            Bound::Lower => ">",
        };
        write!(
            f,
            "[{}] {:<4} {:<36} {:.3e} {op} {:.1e} ({} trials)",
            self.criterion,
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance,
            self.trials
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn criterion_passed(&self, criterion: u8) -> bool {
        self.checks
            .iter()
            .filter(|c| c.criterion == criterion)
            .all(CheckResult::passed)
    }
}

/// Running maximum (or minimum) of one check.
struct Check {
    result: CheckResult,
}

impl Check {
    fn upper(criterion: u8, name: impl Into<String>, tol: f64, cfg: &VerifyConfig) -> Self {
        Self::new(criterion, name, cfg.tol_all.unwrap_or(tol), Bound::Upper)
    }

    fn lower(criterion: u8, name: impl Into<String>, threshold: f64) -> Self {
        Self::new(criterion, name, threshold, Bound::Lower)
    }

    fn new(criterion: u8, name: impl Into<String>, tolerance: f64, bound: Bound) -> Self {
        Check {
            result: CheckResult {
                name: name.into(),
                criterion,
                bound,
                residual: match bound {
                    Bound::Upper => 0.0,
                    Bound::Lower => f64::INFINITY,
                },
                tolerance,
                trials: 0,
                error: None,
            },
        }
    }

    fn record(&mut self, outcome: Result<f64>) {
        let r = &mut self.result;
        r.trials += 1;
        match outcome {
            Ok(v) if v.is_nan() => {
                r.error.get_or_insert_with(|| "NaN residual".into());
            }
            Ok(v) => {
                r.residual = match r.bound {
                    Bound::Upper => r.residual.max(v),
                    Bound::Lower => r.residual.min(v),
                };
            }
            Err(e) => {
                r.error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn finish(self) -> CheckResult {
        self.result
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

fn charts(n: usize, cfg: &VerifyConfig) -> Result<Vec<Box<dyn LeChart<f64>>>> {
    Ok(vec![
        Box::new(SpdChart::new(n)?),
        Box::new(OffLogChart::with_solver(n, cfg.solver.fixed_point)?),
        Box::new(LogScalingChart::with_solver(n, cfg.solver.newton)?),
    ])
}

fn random_point(chart: &dyn LeChart<f64>, rng: &mut CounterRng) -> SymMat<f64> {
    match chart.model() {
        Subspace::Full => random_spd(rng, chart.dim(), POINT_SCALE),
        _ => random_corr(rng, chart.dim(), POINT_SCALE),
    }
}

/// Runs every criterion.
pub fn run(cfg: &VerifyConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::default();
    for c in CRITERIA {
        report.checks.extend(run_criterion(c, cfg)?.checks);
    }
    Ok(report)
}

/// Runs one numbered criterion.
pub fn run_criterion(criterion: u8, cfg: &VerifyConfig) -> Result<Report> {
    cfg.validate()?;
    let checks = match criterion {
        1 => round_trips(cfg)?,
        2 => group_axioms(cfg)?,
        3 => scaler_identities(cfg),
        4 => metric_split(cfg),
        5 => tangent_maps(cfg)?,
        6 => isometries(cfg)?,
        7 => vec![psi_ol_golden(cfg)],
        8 => vec![helmert_identities(cfg)],
        9 => quotient_identities(cfg),
        10 => vec![non_horizontality(cfg)],
        11 => uniqueness(cfg),
        other => {
            return Err(Error::InvalidConfig(format!("no criterion {other}")));
        }
    };
    Ok(Report {
        checks: checks.into_iter().map(Check::finish).collect(),
    })
}

fn round_trips(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, name) in ["spd-le", "corr-offlog", "corr-logscaling"].iter().enumerate() {
        let tol = if k == 0 { 1e-9 } else { 1e-8 };
        let mut trip = Check::upper(1, format!("round_trip/{name}"), tol, cfg);
        let mut model = Check::upper(1, format!("model_subspace/{name}"), 1e-9, cfg);
        for n in cfg.sizes() {
            let chart = &charts(n, cfg)?[k];
            let mut rng = cfg.rng(1, n, k as u64);
            for _ in 0..cfg.trials {
                let x = random_point(chart.as_ref(), &mut rng);
                let image = chart.fwd(&x);
                model.record(
                    image
                        .as_ref()
                        .map(|s| chart.model().residual(s))
                        .map_err(Clone::clone),
                );
                trip.record(image.and_then(|s| {
                    let back = chart.inv(&s)?;
                    Ok((&back - &x).fro_norm() / (1.0 + x.fro_norm()))
                }));
            }
        }
        out.push(trip);
        out.push(model);
    }
    Ok(out)
}

fn group_axioms(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, name) in ["spd-le", "corr-offlog", "corr-logscaling"].iter().enumerate() {
        let mut checks: Vec<Check> = ["associativity", "commutativity", "identity", "inverse"]
            .iter()
            .map(|ax| Check::upper(2, format!("{ax}/{name}"), 1e-9, cfg))
            .collect();
        for n in cfg.sizes() {
            let chart = &charts(n, cfg)?[k];
            let ch = chart.as_ref();
            let mut rng = cfg.rng(2, n, k as u64);
            for _ in 0..cfg.trials {
                let a = random_point(ch, &mut rng);
                let b = random_point(ch, &mut rng);
                let c = random_point(ch, &mut rng);
                let e = ch.identity();
                let resid = |x: &SymMat<f64>, y: &SymMat<f64>| {
                    (x - y).fro_norm() / (1.0 + y.fro_norm())
                };
                checks[0].record((|| {
                    let left = ch.star(&ch.star(&a, &b)?, &c)?;
                    let right = ch.star(&a, &ch.star(&b, &c)?)?;
                    Ok(resid(&left, &right))
                })());
                checks[1].record((|| Ok(resid(&ch.star(&a, &b)?, &ch.star(&b, &a)?)))());
                checks[2].record((|| Ok(resid(&ch.star(&e, &a)?, &a)))());
                checks[3].record((|| Ok(resid(&ch.star(&a, &ch.group_inverse(&a)?)?, &e)))());
            }
        }
        out.extend(checks);
    }
    Ok(out)
}

fn max_diag_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn scaler_identities(cfg: &VerifyConfig) -> Vec<Check> {
    let fp = &cfg.solver.fixed_point;
    let mut equiv = Check::upper(3, "scaler/equivariance", 1e-10, cfg);
    let mut dlog_id = Check::upper(3, "scaler/normaliser_of_offlog", 1e-10, cfg);
    let mut inv_rel = Check::upper(3, "scaler/inverse_relation", 1e-10, cfg);
    for n in cfg.sizes() {
        let mut rng = cfg.rng(3, n, 0);
        for _ in 0..cfg.trials {
            let s = random_sym::<f64>(&mut rng, n, POINT_SCALE);
            let delta = random_diag::<f64>(&mut rng, n, 1.0);
            equiv.record((|| {
                let base = solve_d(&s, fp)?.diag;
                let shifted = solve_d(&(&s + &delta), fp)?.diag;
                let moved: Vec<f64> = shifted.iter().zip(delta.diag()).map(|(a, d)| a + d).collect();
                Ok(max_diag_gap(&moved, &base))
            })());

            let x = random_corr::<f64>(&mut rng, n, POINT_SCALE);
            let log_x = mat_log(&x);
            dlog_id.record(log_x.clone().and_then(|l| {
                Ok(max_diag_gap(&solve_d(&l.off(), fp)?.diag, &l.diag()))
            }));
            // D(−Log X) = D(−log X) − Diag(log X), equivalently
            // D(−Log X) + D(Log X) = D(−log X).
            inv_rel.record(log_x.and_then(|l| {
                let neg_off = solve_d(&-&l.off(), fp)?.diag;
                let pos_off = solve_d(&l.off(), fp)?.diag;
                let neg_full = solve_d(&-&l, fp)?.diag;
                let shifted: Vec<f64> =
                    neg_full.iter().zip(l.diag()).map(|(a, d)| a - d).collect();
                let summed: Vec<f64> = neg_off.iter().zip(&pos_off).map(|(a, b)| a + b).collect();
                Ok(max_diag_gap(&neg_off, &shifted).max(max_diag_gap(&summed, &neg_full)))
            }));
        }
    }
    vec![equiv, dlog_id, inv_rel]
}

fn metric_split(cfg: &VerifyConfig) -> Vec<Check> {
    let mut split = Check::upper(4, "metric/orthogonal_split", 1e-12, cfg);
    let mut degenerate = Check::upper(4, "metric/offlog_degeneracy", 1e-11, cfg);
    for n in cfg.sizes() {
        let mut rng = cfg.rng(4, n, 0);
        for _ in 0..cfg.trials {
            let s = random_spd::<f64>(&mut rng, n, POINT_SCALE);
            let d = random_sym::<f64>(&mut rng, n, 1.0);
            let x = random_sym::<f64>(&mut rng, n, 1.0);
            split.record((|| {
                let le = g_le(&s, &d, &x)?;
                let parts = g_ol_ambient(&s, &d, &x)? + g_dl_ambient(&s, &d, &x)?;
                Ok((le - parts).abs() / (1.0 + le.abs()))
            })());
            let w = random_diag::<f64>(&mut rng, n, 1.0);
            degenerate.record((|| {
                let dir = dexp(&mat_log(&s)?, &w)?;
                Ok(g_ol_ambient(&s, &dir, &x)?.abs())
            })());
        }
    }
    vec![split, degenerate]
}

/// Maps under test: `(point, tangent) -> pushforward` and its value map.
type Push<'a> = Box<dyn Fn(&SymMat<f64>, &SymMat<f64>) -> Result<SymMat<f64>> + 'a>;
type Value<'a> = Box<dyn Fn(&SymMat<f64>) -> Result<SymMat<f64>> + 'a>;

/// Fourth-order central difference `(−f(2h) + 8f(h) − 8f(−h) + f(−2h)) / 12h`.
fn central_difference(value: &Value, p: &SymMat<f64>, v: &SymMat<f64>) -> Result<SymMat<f64>> {
    let at = |k: f64| value(&(p + &v.scale(k * FD_STEP)));
    let near = &at(1.0)? - &at(-1.0)?;
    let far = &at(2.0)? - &at(-2.0)?;
    Ok((&near.scale(8.0) - &far).scale(1.0 / (12.0 * FD_STEP)))
}

fn fd_check(value: &Value, push: &Push, p: &SymMat<f64>, v: &SymMat<f64>) -> Result<f64> {
    let fd = central_difference(value, p, v)?;
    Ok(rel((&push(p, v)? - &fd).fro_norm(), fd.fro_norm()))
}

fn tangent_maps(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut fd = Vec::new();
    let mut inverse = Vec::new();
    let names = [
        ("dexp", "dlog"),
        ("offlog_dlog", "offlog_dexp"),
        ("logscaling_dlog", "logscaling_dexp"),
    ];
    for (fwd_name, inv_name) in names {
        fd.push(Check::upper(5, format!("finite_diff/{fwd_name}"), 1e-6, cfg));
        fd.push(Check::upper(5, format!("finite_diff/{inv_name}"), 1e-6, cfg));
        inverse.push(Check::upper(5, format!("mutual_inverse/{fwd_name}"), 1e-7, cfg));
    }
    for n in cfg.sizes() {
        let cs = charts(n, cfg)?;
        for (k, chart) in cs.iter().enumerate() {
            let ch = chart.as_ref();
            let mut rng = cfg.rng(5, n, k as u64);
            // The SPD slot exercises exp and its derivative as the forward map.
            let (fwd, dfwd, inv, dinv): (Value, Push, Value, Push) = if k == 0 {
                (
                    Box::new(mat_exp),
                    Box::new(dexp),
                    Box::new(mat_log),
                    Box::new(dlog),
                )
            } else {
                (
                    Box::new(|p| ch.fwd(p)),
                    Box::new(|p, v| ch.dfwd(p, v)),
                    Box::new(|s| ch.inv(s)),
                    Box::new(|s, y| ch.dinv(s, y)),
                )
            };
            for _ in 0..cfg.trials {
                let (p, v, s, y) = if k == 0 {
                    let s = random_sym::<f64>(&mut rng, n, POINT_SCALE);
                    let v = random_sym::<f64>(&mut rng, n, 1.0);
                    let p = mat_exp(&s)?;
                    let w = random_sym::<f64>(&mut rng, n, 1.0);
                    (s, v, p, w)
                } else {
                    let p = random_corr::<f64>(&mut rng, n, POINT_SCALE);
                    let v = random_hollow::<f64>(&mut rng, n, 1.0);
                    let s = random_in::<f64>(&mut rng, ch.model(), n, POINT_SCALE);
                    let y = random_in::<f64>(&mut rng, ch.model(), n, 1.0);
                    (p, v, s, y)
                };
                fd[2 * k].record(fd_check(&fwd, &dfwd, &p, &v));
                fd[2 * k + 1].record(fd_check(&inv, &dinv, &s, &y));
                inverse[k].record((|| {
                    let image = fwd(&p)?;
                    let back = dinv(&image, &dfwd(&p, &v)?)?;
                    Ok(rel((&back - &v).fro_norm(), v.fro_norm()))
                })());
            }
        }
    }
    fd.extend(inverse);
    Ok(fd)
}

fn isometries(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let tol = cfg.tol_all.or(cfg.tol_iso).unwrap_or(1e-8);
    let solver = &cfg.solver;
    let mut out = Vec::new();
    for (k, name) in ["phi_ol", "phi_ls", "phi_ol_to_ls"].iter().enumerate() {
        let mut dist = Check::new(6, format!("isometry_distance/{name}"), tol, Bound::Upper);
        let mut hom = Check::new(6, format!("homomorphism/{name}"), tol, Bound::Upper);
        for n in cfg.sizes() {
            let ol = OffLogChart::with_solver(n, solver.fixed_point)?;
            let ls = LogScalingChart::with_solver(n, solver.newton)?;
            let (source, target): (Box<dyn LeChart<f64>>, &dyn LeChart<f64>) = match k {
                0 => (Box::new(SpdChart::new(n - 1)?), &ol),
                1 => (Box::new(SpdChart::new(n - 1)?), &ls),
                _ => (Box::new(ol), &ls),
            };
            let phi = |x: &SymMat<f64>| match k {
                0 => phi_ol(x, solver),
                1 => phi_ls(x, solver),
                _ => phi_ol_to_ls(x, solver),
            };
            let mut rng = cfg.rng(6, n, k as u64);
            for _ in 0..cfg.trials {
                let a = random_point(source.as_ref(), &mut rng);
                let b = random_point(source.as_ref(), &mut rng);
                let images = phi(&a).and_then(|fa| Ok((fa, phi(&b)?)));
                dist.record(images.as_ref().map_err(Clone::clone).and_then(|(fa, fb)| {
                    let d = source.dist(&a, &b)?;
                    Ok((target.dist(fa, fb)? - d).abs() / (1.0 + d))
                }));
                hom.record(images.and_then(|(fa, fb)| {
                    let lhs = phi(&source.star(&a, &b)?)?;
                    Ok((&lhs - &target.star(&fa, &fb)?).fro_norm())
                }));
            }
        }
        out.push(dist);
        out.push(hom);
    }
    Ok(out)
}

fn psi_ol_golden(cfg: &VerifyConfig) -> Check {
    let mut check = Check::upper(7, "psi_ol/golden_example", 0.0, cfg);
    check.record((|| {
        let x = SymMat::from_rows(&[
            [1.0, 5.0, 6.0, 7.0],
            [5.0, 2.0, 8.0, 9.0],
            [6.0, 8.0, 3.0, 10.0],
            [7.0, 9.0, 10.0, 4.0],
        ])?;
        let r2 = 2f64.sqrt();
        let want = SymMat::from_rows(&[
            [0.0, 1.0 / r2, 2.0 / r2, 3.0 / r2, 4.0 / r2],
            [1.0 / r2, 0.0, 5.0, 6.0, 7.0],
            [2.0 / r2, 5.0, 0.0, 8.0, 9.0],
            [3.0 / r2, 6.0, 8.0, 0.0, 10.0],
            [4.0 / r2, 7.0, 9.0, 10.0, 0.0],
        ])?;
        let h = psi_ol(&x);
        Ok((&h - &want).max_abs().max((&psi_ol_inv(&h)? - &x).max_abs()))
    })());
    check
}

fn helmert_identities(cfg: &VerifyConfig) -> Check {
    let mut check = Check::upper(8, "helmert/identities", 1e-14, cfg);
    for n in 2..=cfg.n_max.max(10) {
        check.record((|| {
            let b = Helmert::<f64>::new(n)?;
            let m = b.matrix();
            let annihilates = m.matvec(&vec![1.0; n]).iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let orthonormal = m.matmul(&m.transpose()).sub(&Mat::identity(n - 1)).max_abs();
            let centring = Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64);
            let projector = m.transpose().matmul(m).sub(&centring).max_abs();
            Ok(annihilates.max(orthonormal).max(projector))
        })());
    }
    check
}

fn quotient_identities(cfg: &VerifyConfig) -> Vec<Check> {
    let fp = &cfg.solver.fixed_point;
    let mut fibre = Check::upper(9, "quotient/fibre_invariance", 1e-10, cfg);
    let mut section = Check::upper(9, "quotient/section_property", 1e-9, cfg);
    let mut q_ol = Check::upper(9, "quotient/metric_equals_offlog", 1e-8, cfg);
    let mut q_dl = Check::upper(9, "quotient/defect_equals_diagonal", 1e-8, cfg);
    let mut iso = Check::upper(9, "quotient/canonical_isometry", 1e-10, cfg);
    let mut horizontal = Check::upper(9, "quotient/lift_horizontality", 1e-9, cfg);
    let mut projects = Check::upper(9, "quotient/lift_projection", 1e-9, cfg);
    for n in cfg.sizes() {
        let mut rng = cfg.rng(9, n, 0);
        let spd = match SpdChart::new(n) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for _ in 0..cfg.trials {
            let s = random_spd::<f64>(&mut rng, n, POINT_SCALE);
            let t = random_spd::<f64>(&mut rng, n, POINT_SCALE);
            let d = SymMat::from_diag(&random_positive::<f64>(&mut rng, n, 1.0));
            let v = random_hollow::<f64>(&mut rng, n, 1.0);
            fibre.record((|| {
                let a = project(&s)?;
                let b = project(&spd.star(&s, &d)?)?;
                Ok((a.canon() - b.canon()).max_abs())
            })());
            section.record((|| {
                let c = project(&s)?;
                let can = project(&canonical_section(&c)?)?;
                let cor = project(&correlation_section(&c, fp)?)?;
                Ok((can.canon() - c.canon()).max_abs().max((cor.canon() - c.canon()).max_abs()))
            })());
            let metrics = project(&s).and_then(|c| section_metrics(&c, &v, fp));
            q_ol.record(metrics.as_ref().map(|m| (m.ol - m.quotient).abs()).map_err(Clone::clone));
            q_dl.record(
                metrics
                    .map(|m| (m.defect() - m.dl).abs().max(-m.defect()).max(-m.dl)),
            );
            iso.record((|| {
                let (a, b) = (project(&s)?, project(&t)?);
                let dle = spd.dist(&canonical_section(&a)?, &canonical_section(&b)?)?;
                Ok((dist_q(&a, &b)? - dle).abs())
            })());
            let back = horizontal_lift(&s, &v).and_then(|lift| dlog(&s, &lift));
            horizontal.record(
                back.as_ref()
                    .map(|b| Subspace::Hollow.residual(b))
                    .map_err(Clone::clone),
            );
            projects.record(back.map(|b| (&b.off() - &v).max_abs()));
        }
    }
    vec![fibre, section, q_ol, q_dl, iso, horizontal, projects]
}

fn non_horizontality(cfg: &VerifyConfig) -> Check {
    let fp = &cfg.solver.fixed_point;
    let mut check = Check::lower(10, "quotient/vertical_defect_witness", 1e-6);
    for n in cfg.sizes() {
        let mut rng = cfg.rng(10, n, 0);
        let mut best: Result<f64> = Ok(0.0);
        for _ in 0..cfg.trials {
            let s = random_spd::<f64>(&mut rng, n, POINT_SCALE);
            let v = random_hollow::<f64>(&mut rng, n, 1.0);
            let v = v.scale(1.0 / v.fro_norm());
            let defect = project(&s).and_then(|c| section_metrics(&c, &v, fp));
            best = match (best, defect) {
                (Ok(b), Ok(m)) => Ok(b.max(m.defect())),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
        }
        check.record(best);
    }
    check
}

fn uniqueness(cfg: &VerifyConfig) -> Vec<Check> {
    let mut d_check = Check::upper(11, "uniqueness/unit_diagonal_normaliser", 1e-8, cfg);
    let mut dstar_check = Check::upper(11, "uniqueness/row_sum_normaliser", 1e-8, cfg);
    for n in cfg.sizes() {
        let mut rng = cfg.rng(11, n, 0);
        for _ in 0..cfg.trials {
            let s = random_sym::<f64>(&mut rng, n, POINT_SCALE);
            let sigma = random_spd::<f64>(&mut rng, n, POINT_SCALE);
            let starts_d: Vec<Vec<f64>> = (0..RESTARTS)
                .map(|_| random_diag::<f64>(&mut rng, n, 1.0).diag())
                .collect();
            let starts_p: Vec<Vec<f64>> = (0..RESTARTS)
                .map(|_| random_positive::<f64>(&mut rng, n, 1.0))
                .collect();
            d_check.record((|| {
                let base = solve_d(&s, &cfg.solver.fixed_point)?.diag;
                let mut worst = 0.0f64;
                for d0 in &starts_d {
                    let other = solve_d_from(&s, d0, &cfg.solver.fixed_point)?.diag;
                    worst = worst.max(max_diag_gap(&base, &other));
                }
                Ok(worst)
            })());
            dstar_check.record((|| {
                let base = solve_dstar(&sigma, &cfg.solver.newton)?.diag;
                let mut worst = 0.0f64;
                for d0 in &starts_p {
                    let other = solve_dstar_from(&sigma, d0, &cfg.solver.newton)?.diag;
                    worst = worst.max(max_diag_gap(&base, &other));
                }
                Ok(worst)
            })());
        }
    }
    vec![d_check, dstar_check]
}
