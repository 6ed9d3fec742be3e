//! The exponential chart on SPD matrices and its metric split into
//! off-diagonal and diagonal parts.

use crate::error::{Error, Result};
use crate::group::LeChart;
use crate::scalar::Real;
use crate::symlin::{
    check_positive_definite, dexp, dlog, dlog_with, frobenius, mat_exp, mat_log, sym_eig,
    Subspace, SymMat,
};

/// `φ = log : S⁺(n) → S(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpdChart {
    n: usize,
}

impl SpdChart {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(SpdChart { n })
    }
}

impl<T: Real> LeChart<T> for SpdChart {
    fn name(&self) -> &'static str {
        "spd-le"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn model(&self) -> Subspace {
        Subspace::Full
    }

    fn check_member(&self, p: &SymMat<T>) -> Result<()> {
        p.check_dim(self.n)?;
        check_positive_definite(&sym_eig(p)?)
    }

    fn fwd(&self, p: &SymMat<T>) -> Result<SymMat<T>> {
        p.check_dim(self.n)?;
        mat_log(p)
    }

    fn inv(&self, s: &SymMat<T>) -> Result<SymMat<T>> {
        s.check_dim(self.n)?;
        mat_exp(s)
    }

    fn dfwd(&self, p: &SymMat<T>, x: &SymMat<T>) -> Result<SymMat<T>> {
        p.check_dim(self.n)?;
        dlog(p, x)
    }

    fn dinv(&self, s: &SymMat<T>, y: &SymMat<T>) -> Result<SymMat<T>> {
        s.check_dim(self.n)?;
        dexp(s, y)
    }
}

fn dlog_pair<T: Real>(
    sigma: &SymMat<T>,
    delta: &SymMat<T>,
    xi: &SymMat<T>,
) -> Result<(SymMat<T>, SymMat<T>)> {
    let eig = sym_eig(sigma)?;
    check_positive_definite(&eig)?;
    delta.check_dim(sigma.n())?;
    xi.check_dim(sigma.n())?;
    Ok((dlog_with(&eig, delta), dlog_with(&eig, xi)))
}

/// Log-Euclidean metric `⟨d log(δ), d log(ξ)⟩` at `Σ`.
pub fn g_le<T: Real>(sigma: &SymMat<T>, delta: &SymMat<T>, xi: &SymMat<T>) -> Result<T> {
    let (a, b) = dlog_pair(sigma, delta, xi)?;
    frobenius(&a, &b)
}

/// Off-diagonal part of the log-Euclidean metric; degenerate along directions
/// whose `d log` image is diagonal.
pub fn g_ol_ambient<T: Real>(sigma: &SymMat<T>, delta: &SymMat<T>, xi: &SymMat<T>) -> Result<T> {
    let (a, b) = dlog_pair(sigma, delta, xi)?;
    frobenius(&a.off(), &b.off())
}

/// Diagonal part of the log-Euclidean metric.
pub fn g_dl_ambient<T: Real>(sigma: &SymMat<T>, delta: &SymMat<T>, xi: &SymMat<T>) -> Result<T> {
    let (a, b) = dlog_pair(sigma, delta, xi)?;
    frobenius(&a.diag_part(), &b.diag_part())
}
