use loglie_core::isometries::{
    phi_ls, phi_ls_inv, phi_ls_to_ol, phi_ol, phi_ol_inv, phi_ol_to_ls,
};
use loglie_core::verify::{self, VerifyConfig};
use loglie_core::{
    le_mean, le_variance, GroupElem, LeChart, LogScalingChart, OffLogChart, SolverConfig,
    SpdChart, SymMat,
};

use crate::args::{ChartKind, Cli, Command, Common};
use crate::error::CliError;
use crate::input::load_all;
use crate::output::{DistanceCheck, Output};

/// Default tolerance of the distance-preservation check in `map`.
const TAU_ISO: f64 = 1e-8;

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub chart: ChartKind,
    pub seed: u64,
    pub solver: SolverConfig<f64>,
    pub tol_all: Option<f64>,
    pub tol_iso: Option<f64>,
}

impl RunConfig {
    pub fn from_common(c: &Common) -> Result<Self, CliError> {
        let mut solver = SolverConfig::default();
        if let Some(eps) = c.tol_fixed_point {
            solver.fixed_point.eps = eps;
        }
        if let Some(tol) = c.tol_newton {
            solver.newton.tol = tol;
        }
        solver.validate()?;
        Ok(RunConfig {
            chart: c.chart,
            seed: c.seed,
            solver,
            tol_all: c.tol_all,
            tol_iso: c.tol_iso,
        })
    }

    fn iso_tolerance(&self) -> f64 {
        self.tol_all.or(self.tol_iso).unwrap_or(TAU_ISO)
    }
}

pub fn build_chart(
    kind: ChartKind,
    n: usize,
    solver: &SolverConfig<f64>,
) -> Result<Box<dyn LeChart<f64>>, CliError> {
    Ok(match kind {
        ChartKind::SpdLe => Box::new(SpdChart::new(n)?),
        ChartKind::CorrOfflog => Box::new(OffLogChart::with_solver(n, solver.fixed_point)?),
        ChartKind::CorrLogscaling => Box::new(LogScalingChart::with_solver(n, solver.newton)?),
    })
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::from_common(&cli.common)?;
    match &cli.command {
        Command::Mean => mean(&cfg, &load_all(&cli.common.inputs)?),
        Command::Geodesic { t } => geodesic(&cfg, &load_all(&cli.common.inputs)?, t),
        Command::Dist => dist(&cfg, &load_all(&cli.common.inputs)?),
        Command::Map { from, to } => map(&cfg, &load_all(&cli.common.inputs)?, *from, *to),
        Command::Verify { trials, n, criteria } => verify(&cfg, *trials, *n, criteria),
    }
}

fn elements<'a>(
    chart: &'a dyn LeChart<f64>,
    mats: &[SymMat<f64>],
) -> Result<Vec<GroupElem<'a, f64>>, CliError> {
    mats.iter()
        .enumerate()
        .map(|(i, m)| {
            GroupElem::new(chart, m.clone()).map_err(|e| match CliError::from(e) {
                CliError::Membership(msg) => {
                    CliError::Membership(format!("matrix {i} is not valid for {}: {msg}", chart.name()))
                }
                other => other,
            })
        })
        .collect()
}

fn exactly_two(mats: &[SymMat<f64>]) -> Result<(), CliError> {
    if mats.len() != 2 {
        return Err(CliError::parse(format!(
            "expected exactly two matrices, got {}",
            mats.len()
        )));
    }
    Ok(())
}

pub fn mean(cfg: &RunConfig, mats: &[SymMat<f64>]) -> Result<Output, CliError> {
    let chart = build_chart(cfg.chart, mats[0].n(), &cfg.solver)?;
    let xs = elements(chart.as_ref(), mats)?;
    Ok(Output::Mean {
        chart: cfg.chart.name(),
        mean: le_mean(&xs)?.into_value(),
        variance: le_variance(&xs)?,
    })
}

pub fn geodesic(cfg: &RunConfig, mats: &[SymMat<f64>], ts: &[f64]) -> Result<Output, CliError> {
    exactly_two(mats)?;
    let chart = build_chart(cfg.chart, mats[0].n(), &cfg.solver)?;
    let xs = elements(chart.as_ref(), mats)?;
    let points = ts
        .iter()
        .map(|&t| Ok((t, xs[0].geodesic(&xs[1], t)?.into_value())))
        .collect::<Result<_, CliError>>()?;
    Ok(Output::Geodesic {
        chart: cfg.chart.name(),
        points,
    })
}

pub fn dist(cfg: &RunConfig, mats: &[SymMat<f64>]) -> Result<Output, CliError> {
    exactly_two(mats)?;
    let chart = build_chart(cfg.chart, mats[0].n(), &cfg.solver)?;
    let xs = elements(chart.as_ref(), mats)?;
    Ok(Output::Dist {
        chart: cfg.chart.name(),
        distance: xs[0].dist(&xs[1])?,
    })
}

type Isometry = fn(&SymMat<f64>, &SolverConfig<f64>) -> loglie_core::Result<SymMat<f64>>;

pub fn map(
    cfg: &RunConfig,
    mats: &[SymMat<f64>],
    from: ChartKind,
    to: ChartKind,
) -> Result<Output, CliError> {
    use ChartKind::*;
    let n = mats[0].n();
    let (phi, target_n): (Isometry, usize) = match (from, to) {
        (SpdLe, CorrOfflog) => (phi_ol, n + 1),
        (SpdLe, CorrLogscaling) => (phi_ls, n + 1),
        (CorrOfflog, SpdLe) => (phi_ol_inv, n.saturating_sub(1)),
        (CorrLogscaling, SpdLe) => (phi_ls_inv, n.saturating_sub(1)),
        (CorrOfflog, CorrLogscaling) => (phi_ol_to_ls, n),
        (CorrLogscaling, CorrOfflog) => (phi_ls_to_ol, n),
        _ => {
            return Err(CliError::parse(format!(
                "no isometry from {} to itself",
                from.name()
            )))
        }
    };
    let source = build_chart(from, n, &cfg.solver)?;
    let target = build_chart(to, target_n, &cfg.solver)?;
    elements(source.as_ref(), mats)?;
    let images = mats
        .iter()
        .map(|m| phi(m, &cfg.solver))
        .collect::<Result<Vec<_>, _>>()?;

    let check = (mats.len() >= 2)
        .then(|| -> Result<DistanceCheck, CliError> {
            let mut worst = 0.0f64;
            let mut pairs = 0;
            for i in 0..mats.len() {
                for j in i + 1..mats.len() {
                    let d = source.dist(&mats[i], &mats[j])?;
                    let e = target.dist(&images[i], &images[j])?;
                    worst = worst.max((e - d).abs() / (1.0 + d));
                    pairs += 1;
                }
            }
            Ok(DistanceCheck {
                pairs,
                max_residual: worst,
                tolerance: cfg.iso_tolerance(),
            })
        })
        .transpose()?;
    Ok(Output::Map {
        from: from.name(),
        to: to.name(),
        matrices: images,
        check,
    })
}

pub fn verify(
    cfg: &RunConfig,
    trials: usize,
    n: (usize, usize),
    criteria: &[u8],
) -> Result<Output, CliError> {
    let vcfg = VerifyConfig {
        n_min: n.0,
        n_max: n.1,
        trials,
        seed: cfg.seed,
        tol_all: cfg.tol_all,
        tol_iso: cfg.tol_iso,
        solver: cfg.solver,
    };
    let report = if criteria.is_empty() {
        verify::run(&vcfg)?
    } else {
        let mut report = verify::Report::default();
        for &c in criteria {
            report.checks.extend(verify::run_criterion(c, &vcfg)?.checks);
        }
        report
    };
    Ok(Output::Verify {
        seed: cfg.seed,
        n,
        trials,
        report,
    })
}
