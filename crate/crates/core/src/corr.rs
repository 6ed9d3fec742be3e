//! Two log-Euclidean structures on full-rank correlation matrices.
//!
//! * Off-log: `Log C = off(log C)` onto hollow matrices, inverted by
//!   `Exp S = exp(D(S) + S)`.
//! * Log-scaling: `Log• C = log(D* C D*)` onto row-zero matrices, inverted by
//!   `Exp• S = π₁(exp S)`.
//!
//! Tangent vectors at a correlation matrix are hollow ambient matrices.

use crate::error::{Error, Result};
use crate::group::LeChart;
use crate::scalar::Real;
use crate::scalers::{d_derivative_at, solve_d, solve_dstar, FixedPointConfig, NewtonConfig};
use crate::symlin::{
    check_positive_definite, dexp_with, dlog_with, mat_exp, sym_eig, Subspace,
    SymEig, SymMat,
};

/// Allowed deviation of a correlation diagonal from one.
pub const TAU_UNIT_DIAG: f64 = 1e-10;

/// Positive-definite with unit diagonal; returns the eigendecomposition.
pub fn check_correlation<T: Real>(c: &SymMat<T>) -> Result<SymEig<T>> {
    let eig = sym_eig(c)?;
    check_positive_definite(&eig)?;
    let dev = c
        .diag()
        .into_iter()
        .fold(T::zero(), |m, x| m.max((x - T::one()).abs()));
    if dev > T::tol(TAU_UNIT_DIAG) {
        return Err(Error::NotMember(format!(
            "diagonal deviates from 1 by {:e}", dev.as_f64()
        )));
    }
    Ok(eig)
}

/// Correlation rescaling `diag(Σ)^{-1/2} Σ diag(Σ)^{-1/2}`; the result has an exact unit diagonal.
pub fn pi1<T: Real>(sigma: &SymMat<T>) -> Result<SymMat<T>> {
    let mut d = Vec::with_capacity(sigma.n());
    for x in sigma.diag() {
        if !(x > T::zero()) {
            return Err(Error::NotMember(format!("non-positive diagonal entry {x}")));
        }
        d.push(x.sqrt().recip());
    }
    let c = sigma.scale_diag(&d);
    Ok(SymMat::from_fn(sigma.n(), |i, j| {
        if i == j {
            T::one()
        } else {
            c.get(i, j)
        }
    }))
}

fn corr_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

fn shift_diag<T: Real>(s: &SymMat<T>, d: &[T]) -> SymMat<T> {
    SymMat::from_fn(s.n(), |i, j| {
        if i == j {
            s.get(i, i) + d[i]
        } else {
            s.get(i, j)
        }
    })
}

/// Off-log chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffLogChart<T> {
    n: usize,
    pub solver: FixedPointConfig<T>,
}

impl<T: Real> OffLogChart<T> {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_solver(n, FixedPointConfig::default())
    }

    pub fn with_solver(n: usize, solver: FixedPointConfig<T>) -> Result<Self> {
        corr_dim(n)?;
        solver.validate()?;
        Ok(OffLogChart { n, solver })
    }

    /// Eigendecomposition of `D(S) + S`.
    fn normalised_eig(&self, s: &SymMat<T>) -> Result<SymEig<T>> {
        s.check_dim(self.n)?;
        let d = solve_d(s, &self.solver)?;
        sym_eig(&shift_diag(s, &d.diag))
    }
}

impl<T: Real> LeChart<T> for OffLogChart<T> {
    fn name(&self) -> &'static str {
        "corr-offlog"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn model(&self) -> Subspace {
        Subspace::Hollow
    }

    fn check_member(&self, p: &SymMat<T>) -> Result<()> {
        p.check_dim(self.n)?;
        check_correlation(p).map(|_| ())
    }

    fn fwd(&self, p: &SymMat<T>) -> Result<SymMat<T>> {
        p.check_dim(self.n)?;
        Ok(check_correlation(p)?.apply(|x| x.ln()).off())
    }

    /// A diagonal part in `s` is absorbed by `D`, so only `off(s)` matters.
    fn inv(&self, s: &SymMat<T>) -> Result<SymMat<T>> {
        let eig = self.normalised_eig(s)?;
        Ok(eig.apply(|x| x.exp()))
    }

    fn dfwd(&self, p: &SymMat<T>, x: &SymMat<T>) -> Result<SymMat<T>> {
        p.check_dim(self.n)?;
        x.check_dim(self.n)?;
        Ok(dlog_with(&check_correlation(p)?, x).off())
    }

    fn dinv(&self, s: &SymMat<T>, y: &SymMat<T>) -> Result<SymMat<T>> {
        y.check_dim(self.n)?;
        let eig = self.normalised_eig(s)?;
        let dd = d_derivative_at(&eig, y)?;
        Ok(dexp_with(&eig, &(y + &dd)))
    }
}

/// Log-scaling chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalingChart<T> {
    n: usize,
    pub solver: NewtonConfig<T>,
}

impl<T: Real> LogScalingChart<T> {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_solver(n, NewtonConfig::default())
    }

    pub fn with_solver(n: usize, solver: NewtonConfig<T>) -> Result<Self> {
        corr_dim(n)?;
        solver.validate()?;
        Ok(LogScalingChart { n, solver })
    }

    /// `D* C D*` for a correlation matrix `C`, with its eigendecomposition.
    fn scaled(&self, c: &SymMat<T>) -> Result<(SymMat<T>, Vec<T>, SymEig<T>)> {
        c.check_dim(self.n)?;
        check_correlation(c)?;
        let d = solve_dstar(c, &self.solver)?.diag;
        let sigma = c.scale_diag(&d);
        let eig = sym_eig(&sigma)?;
        Ok((sigma, d, eig))
    }
}

impl<T: Real> LeChart<T> for LogScalingChart<T> {
    fn name(&self) -> &'static str {
        "corr-logscaling"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn model(&self) -> Subspace {
        Subspace::RowZero
    }

    fn check_member(&self, p: &SymMat<T>) -> Result<()> {
        p.check_dim(self.n)?;
        check_correlation(p).map(|_| ())
    }

    fn fwd(&self, p: &SymMat<T>) -> Result<SymMat<T>> {
        let (_, _, eig) = self.scaled(p)?;
        Ok(eig.apply(|x| x.ln()))
    }

    /// Only the row-zero component of `s` round-trips through `fwd`.
    fn inv(&self, s: &SymMat<T>) -> Result<SymMat<T>> {
        s.check_dim(self.n)?;
        pi1(&mat_exp(s)?)
    }

    /// `d log_Σ(ΔXΔ + ½(X⁰Σ + ΣX⁰))` with `Σ = D*CD*`, `Δ = D*` and
    /// `X⁰ = −2 Diag((I + Σ)⁻¹ ΔXΔ1)`.
    fn dfwd(&self, p: &SymMat<T>, x: &SymMat<T>) -> Result<SymMat<T>> {
        x.check_dim(self.n)?;
        let (sigma, d, eig) = self.scaled(p)?;
        let dxd = x.scale_diag(&d);
        let one_plus = SymMat::from_fn(self.n, |i, j| {
            sigma.get(i, j) + if i == j { T::one() } else { T::zero() }
        });
        let x0: Vec<T> = crate::symlin::solve_spd(&one_plus, &dxd.row_sums())?
            .into_iter()
            .map(|v| T::lit(-2.0) * v)
            .collect();
        let half = T::lit(0.5);
        let m = SymMat::from_fn(self.n, |i, j| {
            dxd.get(i, j) + half * (x0[i] + x0[j]) * sigma.get(i, j)
        });
        Ok(dlog_with(&eig, &m))
    }

    /// `Δ⁻¹(E − ½(Δ⁻²Diag(E)Σ + ΣDiag(E)Δ⁻²))Δ⁻¹` with `E = d exp_S(Y)`,
    /// `Σ = exp S` and `Δ = diag(Σ)^{1/2}`.
    fn dinv(&self, s: &SymMat<T>, y: &SymMat<T>) -> Result<SymMat<T>> {
        s.check_dim(self.n)?;
        y.check_dim(self.n)?;
        let eig = sym_eig(s)?;
        let sigma = eig.apply(|x| x.exp());
        let e = dexp_with(&eig, y);
        let ratio: Vec<T> = e
            .diag()
            .iter()
            .zip(sigma.diag())
            .map(|(&ei, si)| ei / si)
            .collect();
        let half = T::lit(0.5);
        let inner = SymMat::from_fn(self.n, |i, j| {
            e.get(i, j) - half * (ratio[i] + ratio[j]) * sigma.get(i, j)
        });
        let inv_sd: Vec<T> = sigma.diag().into_iter().map(|x| x.sqrt().recip()).collect();
        Ok(inner.scale_diag(&inv_sd))
    }
}

/// Off-log metric: pullback of the Frobenius product on hollow matrices.
pub fn g_ol<T: Real>(c: &SymMat<T>, delta: &SymMat<T>, xi: &SymMat<T>) -> Result<T> {
    let chart = OffLogChart::<T>::new(c.n())?;
    chart.metric(c, delta, xi)
}

/// Log-scaling metric: pullback of the Frobenius product on row-zero matrices.
pub fn g_ls<T: Real>(c: &SymMat<T>, delta: &SymMat<T>, xi: &SymMat<T>) -> Result<T> {
    let chart = LogScalingChart::<T>::new(c.n())?;
    chart.metric(c, delta, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_corr, random_hollow, random_row_zero, CounterRng};
    use crate::symlin::{frobenius, mat_log, spd_inverse};

    fn c2(rho: f64) -> SymMat<f64> {
        SymMat::from_rows(&[[1.0, rho], [rho, 1.0]]).unwrap()
    }

    #[test]
    fn pi1_examples() {
        let p = pi1(&SymMat::from_rows(&[[4.0, 3.0], [3.0, 9.0]]).unwrap()).unwrap();
        assert_eq!(p, c2(0.5));
        assert_eq!(pi1(&SymMat::from_diag(&[4.0, 9.0])).unwrap(), SymMat::identity(2));
        let c = random_corr::<f64>(&mut CounterRng::new(1), 4, 0.5);
        assert!((&pi1(&c).unwrap() - &c).max_abs() < 1e-15);
    }

    #[test]
    fn offlog_two_by_two_closed_forms() {
        let ch = OffLogChart::<f64>::new(2).unwrap();
        let f = ch.fwd(&c2(0.3)).unwrap();
        assert!((f.get(0, 1) - 0.3f64.atanh()).abs() < 1e-14 && f.get(0, 0) == 0.0);
        let p = ch.star(&c2(0.5), &c2(0.5)).unwrap();
        assert!((p.get(0, 1) - 0.8).abs() < 1e-12);
        let gi = ch.group_inverse(&c2(0.3)).unwrap();
        assert!((&gi - &c2(-0.3)).max_abs() < 1e-12);
        let d = ch.dist(&c2(0.5), &SymMat::identity(2)).unwrap();
        assert!((d - 2f64.sqrt() * 0.5f64.atanh()).abs() < 1e-14);
        assert!((d - 0.776_836_2).abs() < 1e-7);
        assert_eq!(ch.inv(&SymMat::zeros(2)).unwrap(), SymMat::identity(2));
    }

    #[test]
    fn group_inverse_identities() {
        let mut rng = CounterRng::new(2);
        let ol = OffLogChart::<f64>::new(5).unwrap();
        let ls = LogScalingChart::<f64>::new(5).unwrap();
        for _ in 0..5 {
            let c = random_corr::<f64>(&mut rng, 5, 0.5);
            let inv = spd_inverse(&c).unwrap();
            let want_ol = ol.inv(&mat_log(&inv).unwrap()).unwrap();
            assert!((&ol.group_inverse(&c).unwrap() - &want_ol).max_abs() < 1e-9);
            let want_ls = pi1(&inv).unwrap();
            assert!((&ls.group_inverse(&c).unwrap() - &want_ls).max_abs() < 1e-9);
        }
    }

    #[test]
    fn chart_images_in_model() {
        let mut rng = CounterRng::new(3);
        let ls = LogScalingChart::<f64>::new(6).unwrap();
        for _ in 0..5 {
            let c = random_corr::<f64>(&mut rng, 6, 0.5);
            assert!(Subspace::RowZero.residual(&ls.fwd(&c).unwrap()) < 1e-9);
            let r = random_row_zero::<f64>(&mut rng, 6, 0.5);
            assert!((&ls.fwd(&ls.inv(&r).unwrap()).unwrap() - &r).fro_norm() < 1e-9);
        }
        assert_eq!(ls.fwd(&SymMat::identity(3).clone()).ok(), None); // wrong size
        let ls3 = LogScalingChart::<f64>::new(3).unwrap();
        assert!(ls3.fwd(&SymMat::identity(3)).unwrap().max_abs() < 1e-15);
    }

    fn fd_fwd(ch: &dyn LeChart<f64>, c: &SymMat<f64>, x: &SymMat<f64>, h: f64) -> SymMat<f64> {
        let p = ch.fwd(&(c + &x.scale(h))).unwrap();
        let m = ch.fwd(&(c - &x.scale(h))).unwrap();
        (&p - &m).scale(0.5 / h)
    }

    fn fd_inv(ch: &dyn LeChart<f64>, s: &SymMat<f64>, y: &SymMat<f64>, h: f64) -> SymMat<f64> {
        let p = ch.inv(&(s + &y.scale(h))).unwrap();
        let m = ch.inv(&(s - &y.scale(h))).unwrap();
        (&p - &m).scale(0.5 / h)
    }

    #[test]
    fn tangent_maps_match_finite_differences_and_invert() {
        let mut rng = CounterRng::new(4);
        for n in 2..6 {
            let ol = OffLogChart::<f64>::new(n).unwrap();
            let ls = LogScalingChart::<f64>::new(n).unwrap();
            for ch in [&ol as &dyn LeChart<f64>, &ls] {
                let c = random_corr::<f64>(&mut rng, n, 0.5);
                let x = random_hollow::<f64>(&mut rng, n, 1.0);
                let a = ch.dfwd(&c, &x).unwrap();
                let fd = fd_fwd(ch, &c, &x, 1e-5);
                assert!((&a - &fd).fro_norm() <= 1e-6 * fd.fro_norm(), "{} dfwd", ch.name());
                let s = ch.fwd(&c).unwrap();
                let back = ch.dinv(&s, &a).unwrap();
                assert!((&back - &x).fro_norm() <= 1e-7 * x.fro_norm(), "{} dinv∘dfwd", ch.name());
                let y = random_in_model(ch, &mut rng);
                let b = ch.dinv(&s, &y).unwrap();
                let fd = fd_inv(ch, &s, &y, 1e-5);
                assert!((&b - &fd).fro_norm() <= 1e-6 * fd.fro_norm(), "{} dinv", ch.name());
                assert!(Subspace::Hollow.residual(&b) < 1e-12);
            }
        }
    }

    fn random_in_model(ch: &dyn LeChart<f64>, rng: &mut CounterRng) -> SymMat<f64> {
        crate::sample::random_in(rng, ch.model(), ch.dim(), 1.0)
    }

    #[test]
    fn metrics_at_identity() {
        let mut rng = CounterRng::new(5);
        let d = random_hollow::<f64>(&mut rng, 4, 1.0);
        let x = random_hollow::<f64>(&mut rng, 4, 1.0);
        let tr = frobenius(&d, &x).unwrap();
        assert!((g_ol(&SymMat::identity(4), &d, &x).unwrap() - tr).abs() < 1e-14);
        assert!(g_ls(&SymMat::identity(4), &d, &d).unwrap() > 0.0);
    }

    #[test]
    fn metrics_match_distance_expansion() {
        // dist(C, C + hX)² ≈ h² g(X, X)
        let mut rng = CounterRng::new(6);
        let c = random_corr::<f64>(&mut rng, 4, 0.4);
        let x = random_hollow::<f64>(&mut rng, 4, 1.0);
        let h = 1e-5;
        let shifted = &c + &x.scale(h);
        for ch in [
            &OffLogChart::<f64>::new(4).unwrap() as &dyn LeChart<f64>,
            &LogScalingChart::<f64>::new(4).unwrap(),
        ] {
            let g = ch.metric(&c, &x, &x).unwrap();
            let d2 = ch.dist(&c, &shifted).unwrap().powi(2) / (h * h);
            assert!((g - d2).abs() <= 1e-4 * g, "{}: {g} vs {d2}", ch.name());
        }
    }

    #[test]
    fn rejects_non_correlation() {
        let ol = OffLogChart::<f64>::new(2).unwrap();
        assert!(matches!(ol.fwd(&SymMat::from_diag(&[2.0, 1.0])), Err(Error::NotMember(_))));
        assert!(OffLogChart::<f64>::new(1).is_err());
    }
}
