//! The quotient of SPD matrices by positive diagonal matrices under the
//! log-Euclidean action `Σ ⋆ D = exp(log Σ + log D)`.
//!
//! A coset is identified by its canonical chart value `off(log Σ)`; coset
//! tangents are hollow matrices in that chart.

use crate::corr::OffLogChart;
use crate::error::{Error, Result};
use crate::group::LeChart;
use crate::scalar::Real;
use crate::scalers::FixedPointConfig;
use crate::spd::{g_dl_ambient, g_le, g_ol_ambient};
use crate::symlin::{dexp, frobenius, mat_exp, mat_log, Subspace, SymMat};

/// Allowed diagonal in a canonical coset value.
pub const TAU_SUBSPACE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Coset<T> {
    rep: SymMat<T>,
    canon: SymMat<T>,
}

impl<T: Real> Coset<T> {
    /// Coset with canonical value `canon` represented by `exp(canon)`.
    pub fn from_canonical(canon: SymMat<T>) -> Result<Self> {
        let resid = Subspace::Hollow.residual(&canon);
        if resid > T::tol(TAU_SUBSPACE) {
            return Err(Error::NotMember(format!(
                "canonical coset value has diagonal {:e}", resid.as_f64()
            )));
        }
        let canon = canon.off();
        Ok(Coset {
            rep: mat_exp(&canon)?,
            canon,
        })
    }

    pub fn rep(&self) -> &SymMat<T> {
        &self.rep
    }

    pub fn canon(&self) -> &SymMat<T> {
        &self.canon
    }

    pub fn n(&self) -> usize {
        self.canon.n()
    }

    /// Equality of classes, independent of representatives.
    pub fn same_class(&self, other: &Self) -> bool {
        self.n() == other.n() && (&self.canon - &other.canon).max_abs() <= T::tol(TAU_SUBSPACE)
    }
}

/// `Σ ↦ [Σ]`.
pub fn project<T: Real>(sigma: &SymMat<T>) -> Result<Coset<T>> {
    Ok(Coset {
        canon: mat_log(sigma)?.off(),
        rep: sigma.clone(),
    })
}

/// Quotient distance, the Frobenius distance of canonical values.
pub fn dist_q<T: Real>(a: &Coset<T>, b: &Coset<T>) -> Result<T> {
    a.canon.check_dim(b.n())?;
    Ok((&a.canon - &b.canon).fro_norm())
}

/// `exp(off(log Σ))`: the section that is both a homomorphism and an isometric embedding.
pub fn canonical_section<T: Real>(c: &Coset<T>) -> Result<SymMat<T>> {
    mat_exp(&c.canon)
}

/// `exp(D(log Σ) + log Σ)`: the unit-diagonal member of the class.
pub fn correlation_section<T: Real>(c: &Coset<T>, cfg: &FixedPointConfig<T>) -> Result<SymMat<T>> {
    OffLogChart::with_solver(c.n(), *cfg)?.inv(&c.canon)
}

/// `d_{log p} exp(v)`: the horizontal tangent at `p` projecting to `v`.
pub fn horizontal_lift<T: Real>(p: &SymMat<T>, v: &SymMat<T>) -> Result<SymMat<T>> {
    dexp(&mat_log(p)?, v)
}

/// Quotient metric: constant Frobenius product in canonical coordinates.
pub fn g_q<T: Real>(c: &Coset<T>, v: &SymMat<T>, w: &SymMat<T>) -> Result<T> {
    v.check_dim(c.n())?;
    frobenius(v, w)
}

/// Metrics induced on a coset tangent by the correlation section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionMetrics<T> {
    /// `(σ_corr* g^LE)(v, v)`.
    pub le: T,
    /// `(σ_corr* g^OL)(v, v)`, equal to the quotient metric.
    pub ol: T,
    /// `(σ_corr* g^DL)(v, v)`.
    pub dl: T,
    /// `g^Q(v, v)`.
    pub quotient: T,
}

impl<T: Real> SectionMetrics<T> {
    /// Excess of the induced metric over the quotient metric; zero iff the
    /// section is horizontal along `v`.
    pub fn defect(&self) -> T {
        self.le - self.quotient
    }
}

/// Pulls the SPD metrics back along the correlation section in direction `v`.
pub fn section_metrics<T: Real>(
    c: &Coset<T>,
    v: &SymMat<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<SectionMetrics<T>> {
    let chart = OffLogChart::with_solver(c.n(), *cfg)?;
    let point = chart.inv(&c.canon)?;
    let push = chart.dinv(&c.canon, v)?;
    Ok(SectionMetrics {
        le: g_le(&point, &push, &push)?,
        ol: g_ol_ambient(&point, &push, &push)?,
        dl: g_dl_ambient(&point, &push, &push)?,
        quotient: g_q(c, v, v)?,
    })
}

/// `(σ_corr* g^LE)(v, v) − g^Q(v, v)`.
pub fn vertical_defect<T: Real>(
    c: &Coset<T>,
    v: &SymMat<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<T> {
    Ok(section_metrics(c, v, cfg)?.defect())
}
