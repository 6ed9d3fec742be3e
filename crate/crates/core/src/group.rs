//! Log-Euclidean Lie groups induced by a chart.
//!
//! A chart is a global diffeomorphism `φ` from a matrix manifold onto a linear
//! subspace of `S(n)`. Pulling back vector addition gives an abelian group and
//! pulling back the Frobenius product gives a flat bi-invariant metric; every
//! operation here is vector arithmetic in the chart image.

use crate::error::{Error, Result};
use crate::isometries::Helmert;
use crate::sample::{random_in, CounterRng};
use crate::scalar::Real;
use crate::symlin::{frobenius, sym_eig, Mat, Subspace, SymMat};

/// Absolute group-axiom tolerance on unit-scale inputs.
pub const TAU_GROUP: f64 = 1e-9;

/// A chart realising a log-Euclidean structure on `n x n` matrices.
///
/// Tangent vectors are ambient symmetric matrices at the base point.
pub trait LeChart<T: Real>: Send + Sync {
    /// Stable identifier, also used as the CLI chart name.
    fn name(&self) -> &'static str;
    /// Matrix size `n`.
    fn dim(&self) -> usize;
    /// Subspace of `S(n)` that `fwd` maps onto.
    fn model(&self) -> Subspace;
    /// Manifold membership test.
    fn check_member(&self, p: &SymMat<T>) -> Result<()>;
    fn fwd(&self, p: &SymMat<T>) -> Result<SymMat<T>>;
    fn inv(&self, s: &SymMat<T>) -> Result<SymMat<T>>;
    /// Pushforward `d_p φ(x)`.
    fn dfwd(&self, p: &SymMat<T>, x: &SymMat<T>) -> Result<SymMat<T>>;
    /// Pushforward `d_s φ⁻¹(y)`.
    fn dinv(&self, s: &SymMat<T>, y: &SymMat<T>) -> Result<SymMat<T>>;

    fn identity(&self) -> SymMat<T> {
        SymMat::identity(self.dim())
    }

    fn star(&self, a: &SymMat<T>, b: &SymMat<T>) -> Result<SymMat<T>> {
        self.inv(&(&self.fwd(a)? + &self.fwd(b)?))
    }

    fn group_inverse(&self, a: &SymMat<T>) -> Result<SymMat<T>> {
        self.inv(&-&self.fwd(a)?)
    }

    /// `φ⁻¹((1−t)φ(a) + tφ(b))`; any real `t` extrapolates along the same line.
    fn geodesic(&self, a: &SymMat<T>, b: &SymMat<T>, t: T) -> Result<SymMat<T>> {
        let (fa, fb) = (self.fwd(a)?, self.fwd(b)?);
        self.inv(&(&fa.scale(T::one() - t) + &fb.scale(t)))
    }

    fn dist(&self, a: &SymMat<T>, b: &SymMat<T>) -> Result<T> {
        Ok((&self.fwd(a)? - &self.fwd(b)?).fro_norm())
    }

    /// Pulled-back Frobenius metric `⟨d_p φ(x), d_p φ(y)⟩`.
    fn metric(&self, p: &SymMat<T>, x: &SymMat<T>, y: &SymMat<T>) -> Result<T> {
        frobenius(&self.dfwd(p, x)?, &self.dfwd(p, y)?)
    }
}

/// A manifold point tied to the chart that defines its group structure.
#[derive(Clone)]
pub struct GroupElem<'a, T> {
    chart: &'a dyn LeChart<T>,
    value: SymMat<T>,
}

impl<'a, T: Real> GroupElem<'a, T> {
    pub fn new(chart: &'a dyn LeChart<T>, value: SymMat<T>) -> Result<Self> {
        value.check_dim(chart.dim())?;
        chart.check_member(&value)?;
        Ok(GroupElem { chart, value })
    }

    pub fn identity(chart: &'a dyn LeChart<T>) -> Self {
        GroupElem {
            chart,
            value: chart.identity(),
        }
    }

    /// Builds `φ⁻¹(s)` without a membership round trip.
    pub fn from_chart(chart: &'a dyn LeChart<T>, s: &SymMat<T>) -> Result<Self> {
        s.check_dim(chart.dim())?;
        Ok(GroupElem {
            chart,
            value: chart.inv(s)?,
        })
    }

    pub fn chart(&self) -> &'a dyn LeChart<T> {
        self.chart
    }

    pub fn value(&self) -> &SymMat<T> {
        &self.value
    }

    pub fn into_value(self) -> SymMat<T> {
        self.value
    }

    pub fn log(&self) -> Result<SymMat<T>> {
        self.chart.fwd(&self.value)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.chart.name() != other.chart.name() || self.chart.dim() != other.chart.dim() {
            return Err(Error::ChartMismatch {
                left: format!("{}({})", self.chart.name(), self.chart.dim()),
                right: format!("{}({})", other.chart.name(), other.chart.dim()),
            });
        }
        Ok(())
    }

    fn wrap(&self, value: SymMat<T>) -> Self {
        GroupElem {
            chart: self.chart,
            value,
        }
    }

    pub fn star(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(self.wrap(self.chart.star(&self.value, &other.value)?))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.wrap(self.chart.group_inverse(&self.value)?))
    }

    pub fn geodesic(&self, other: &Self, t: T) -> Result<Self> {
        self.same_group(other)?;
        Ok(self.wrap(self.chart.geodesic(&self.value, &other.value, t)?))
    }

    pub fn dist(&self, other: &Self) -> Result<T> {
        self.same_group(other)?;
        self.chart.dist(&self.value, &other.value)
    }
}

impl<T: Real> std::fmt::Debug for GroupElem<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupElem")
            .field("chart", &self.chart.name())
            .field("value", &self.value)
            .finish()
    }
}

/// Chart images of a nonempty sample sharing one group.
fn chart_images<'a, T: Real>(
    samples: &[GroupElem<'a, T>],
) -> Result<(&'a dyn LeChart<T>, Vec<SymMat<T>>)> {
    let first = samples.first().ok_or(Error::EmptySample)?;
    let mut logs = Vec::with_capacity(samples.len());
    for s in samples {
        first.same_group(s)?;
        logs.push(s.log()?);
    }
    Ok((first.chart, logs))
}

fn mean_of<T: Real>(mats: &[SymMat<T>]) -> SymMat<T> {
    let inv_n = T::one() / T::lit(mats.len() as f64);
    let sum = mats
        .iter()
        .skip(1)
        .fold(mats[0].clone(), |acc, m| &acc + m);
    sum.scale(inv_n)
}

/// Log-Euclidean mean `φ⁻¹(mean φ(xᵢ))`.
pub fn le_mean<'a, T: Real>(samples: &[GroupElem<'a, T>]) -> Result<GroupElem<'a, T>> {
    let (chart, logs) = chart_images(samples)?;
    GroupElem::from_chart(chart, &mean_of(&logs))
}

/// Mean squared chart distance to the log-Euclidean mean (`1/N` normalised).
pub fn le_variance<T: Real>(samples: &[GroupElem<'_, T>]) -> Result<T> {
    let (_, logs) = chart_images(samples)?;
    let m = mean_of(&logs);
    let total: T = logs.iter().map(|l| (l - &m).fro_norm().powi(2)).sum();
    Ok(total / T::lit(logs.len() as f64))
}

/// Coordinates of a model-space matrix in a fixed orthonormal basis.
///
/// * `Hollow`: `√2·s_ij` for `i < j` in row-major order.
/// * `Full`: the diagonal `s_kk`, then the hollow coordinates.
/// * `Diagonal`: the diagonal.
/// * `RowZero`: the `Full` coordinates of `B S Bᵀ` with `B` the Helmert
///   contrast, which pulls the `S(n−1)` basis back isometrically.
pub fn vectorize<T: Real>(space: Subspace, s: &SymMat<T>) -> Vec<T> {
    let n = s.n();
    let sqrt2 = T::lit(2.0).sqrt();
    let upper = |s: &SymMat<T>, out: &mut Vec<T>| {
        for i in 0..s.n() {
            for j in i + 1..s.n() {
                out.push(sqrt2 * s.get(i, j));
            }
        }
    };
    let mut out = Vec::with_capacity(space.dim(n));
    match space {
        Subspace::Hollow => upper(s, &mut out),
        Subspace::Diagonal => out.extend(s.diag()),
        Subspace::Full => {
            out.extend(s.diag());
            upper(s, &mut out);
        }
        Subspace::RowZero => {
            if let Ok(reduced) = Helmert::new(n).and_then(|b| b.contract(s)) {
                out.extend(reduced.diag());
                upper(&reduced, &mut out);
            }
        }
    }
    out
}

/// Empirical geometric covariances of paired samples in vectorised chart coordinates.
#[derive(Debug, Clone)]
pub struct GeometricCov<T> {
    pub gg: Mat<T>,
    pub hh: Mat<T>,
    pub gh: Mat<T>,
}

impl<T: Real> GeometricCov<T> {
    /// `ρ = D_gg^{-1/2} Σ_gh D_hh^{-1/2}`.
    pub fn correlation(&self) -> Result<Mat<T>> {
        let inv_sd = |m: &Mat<T>| -> Result<Vec<T>> {
            (0..m.rows())
                .map(|i| {
                    let v = m.get(i, i);
                    if v > T::zero() {
                        Ok(v.sqrt().recip())
                    } else {
                        Err(Error::SingularDiag { index: i })
                    }
                })
                .collect()
        };
        let (dg, dh) = (inv_sd(&self.gg)?, inv_sd(&self.hh)?);
        Ok(Mat::from_fn(self.gh.rows(), self.gh.cols(), |i, j| {
            dg[i] * self.gh.get(i, j) * dh[j]
        }))
    }
}

fn centred<T: Real>(space: Subspace, logs: &[SymMat<T>]) -> Vec<Vec<T>> {
    let vecs: Vec<Vec<T>> = logs.iter().map(|l| vectorize(space, l)).collect();
    let inv_n = T::one() / T::lit(vecs.len() as f64);
    let dim = vecs[0].len();
    let mean: Vec<T> = (0..dim)
        .map(|k| vecs.iter().map(|v| v[k]).sum::<T>() * inv_n)
        .collect();
    vecs.into_iter()
        .map(|v| v.iter().zip(&mean).map(|(&a, &m)| a - m).collect())
        .collect()
}

fn cross_cov<T: Real>(a: &[Vec<T>], b: &[Vec<T>]) -> Mat<T> {
    let inv_n = T::one() / T::lit(a.len() as f64);
    Mat::from_fn(a[0].len(), b[0].len(), |i, j| {
        a.iter().zip(b).map(|(x, y)| x[i] * y[j]).sum::<T>() * inv_n
    })
}

/// Geometric covariances of two equally long samples, possibly from different groups.
pub fn geometric_cov<T: Real>(
    g: &[GroupElem<'_, T>],
    h: &[GroupElem<'_, T>],
) -> Result<GeometricCov<T>> {
    if g.len() != h.len() {
        return Err(Error::LengthMismatch {
            left: g.len(),
            right: h.len(),
        });
    }
    let (gc, gl) = chart_images(g)?;
    let (hc, hl) = chart_images(h)?;
    let cg = centred(gc.model(), &gl);
    let ch = centred(hc.model(), &hl);
    Ok(GeometricCov {
        gg: cross_cov(&cg, &cg),
        hh: cross_cov(&ch, &ch),
        gh: cross_cov(&cg, &ch),
    })
}

/// Outcome of a sampled inverse-consistency test.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport<T> {
    pub trials: usize,
    /// Largest `‖φ(f(x⁻¹)) + φ(f(x))‖_F`.
    pub max_violation: T,
    /// Largest violation relative to its per-sample tolerance.
    pub worst_ratio: T,
    pub consistent: bool,
}

/// Samples `trials` seeded elements and checks `f(x⁻¹) = f(x)⁻¹` in the chart.
pub fn is_inverse_consistent<T: Real>(
    f: impl Fn(&SymMat<T>) -> Result<SymMat<T>>,
    chart: &dyn LeChart<T>,
    trials: usize,
    seed: u64,
) -> Result<ConsistencyReport<T>> {
    let mut rng = CounterRng::new(seed);
    let mut max_violation = T::zero();
    let mut worst_ratio = T::zero();
    for _ in 0..trials {
        let x = chart.inv(&random_in(&mut rng, chart.model(), chart.dim(), 0.5))?;
        let fx = chart.fwd(&f(&x)?)?;
        let fxi = chart.fwd(&f(&chart.group_inverse(&x)?)?)?;
        let violation = (&fx + &fxi).fro_norm();
        let tol = T::tol(TAU_GROUP) * (T::one() + fx.fro_norm());
        max_violation = max_violation.max(violation);
        worst_ratio = worst_ratio.max(violation / tol);
    }
    Ok(ConsistencyReport {
        trials,
        max_violation,
        worst_ratio,
        consistent: worst_ratio <= T::one(),
    })
}

/// Smallest eigenvalue of a square covariance block, for semidefiniteness checks.
pub fn min_eigenvalue<T: Real>(m: &Mat<T>) -> Result<T> {
    Ok(sym_eig(&SymMat::symmetrize(m.clone()))?.min())
}
