//! Explicit isometric group isomorphisms
//! `S⁺(n−1) → Cor⁺(n)` for both correlation structures, and between them.
//!
//! Each one is a linear isometry `ψ : S(n−1) → V` of model spaces transported
//! through the charts: `Φ = φ_target⁻¹ ∘ ψ ∘ log`.

use crate::corr::{LogScalingChart, OffLogChart};
use crate::error::{Error, Result};
use crate::group::LeChart;
use crate::scalar::Real;
use crate::scalers::SolverConfig;
use crate::symlin::{mat_exp, mat_log, Mat, SymMat};

/// Block embedding `S(n−1) → Hol(n)`: the diagonal of `S` scaled by `1/√2`
/// fills the first row and column; `off(S)` fills the trailing block.
pub fn psi_ol<T: Real>(s: &SymMat<T>) -> SymMat<T> {
    let m = s.n();
    let sqrt2 = T::lit(2.0).sqrt();
    SymMat::from_fn(m + 1, |i, j| match (i, j) {
        (0, 0) => T::zero(),
        (0, k) | (k, 0) => s.get(k - 1, k - 1) / sqrt2,
        (i, j) if i == j => T::zero(),
        (i, j) => s.get(i - 1, j - 1),
    })
}

/// Inverse of [`psi_ol`] on hollow matrices of size `n ≥ 2`.
pub fn psi_ol_inv<T: Real>(h: &SymMat<T>) -> Result<SymMat<T>> {
    let n = h.n();
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let sqrt2 = T::lit(2.0).sqrt();
    Ok(SymMat::from_fn(n - 1, |i, j| {
        if i == j {
            h.get(0, i + 1) * sqrt2
        } else {
            h.get(i + 1, j + 1)
        }
    }))
}

/// The `(n−1) x n` Helmert contrast: orthonormal rows, all orthogonal to `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Helmert<T> {
    b: Mat<T>,
}

impl<T: Real> Helmert<T> {
    /// Row `k` (1-based) holds `k` entries `1/√(k(k+1))` followed by `−k/√(k(k+1))`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let b = Mat::from_fn(n - 1, n, |r, j| {
            let k = (r + 1) as f64;
            let norm = (k * (k + 1.0)).sqrt();
            match j.cmp(&(r + 1)) {
                std::cmp::Ordering::Less => T::lit(1.0 / norm),
                std::cmp::Ordering::Equal => T::lit(-k / norm),
                std::cmp::Ordering::Greater => T::zero(),
            }
        });
        Ok(Helmert { b })
    }

    /// Size `n` of the row-zero side.
    pub fn n(&self) -> usize {
        self.b.cols()
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.b
    }

    /// `Bᵀ S B : S(n−1) → Row₀(n)`.
    pub fn expand(&self, s: &SymMat<T>) -> Result<SymMat<T>> {
        s.check_dim(self.n() - 1)?;
        Ok(s.congruence(&self.b))
    }

    /// `B R Bᵀ : Row₀(n) → S(n−1)`.
    pub fn contract(&self, r: &SymMat<T>) -> Result<SymMat<T>> {
        r.check_dim(self.n())?;
        Ok(r.congruence(&self.b.transpose()))
    }
}

/// Conjugation `S(n−1) → Row₀(n)` by the Helmert contrast.
pub fn psi_ls<T: Real>(s: &SymMat<T>) -> SymMat<T> {
    Helmert::new(s.n() + 1)
        .and_then(|h| h.expand(s))
        .expect("dimension follows from the input")
}

pub fn psi_ls_inv<T: Real>(r: &SymMat<T>) -> Result<SymMat<T>> {
    Helmert::new(r.n())?.contract(r)
}

/// `Φ_OL(X) = Exp(ψ_OL(log X))`.
pub fn phi_ol<T: Real>(x: &SymMat<T>, cfg: &SolverConfig<T>) -> Result<SymMat<T>> {
    let chart = OffLogChart::with_solver(x.n() + 1, cfg.fixed_point)?;
    chart.inv(&psi_ol(&mat_log(x)?))
}

/// `Φ_OL⁻¹(C) = exp(ψ_OL⁻¹(Log C))`.
pub fn phi_ol_inv<T: Real>(c: &SymMat<T>, cfg: &SolverConfig<T>) -> Result<SymMat<T>> {
    let chart = OffLogChart::with_solver(c.n(), cfg.fixed_point)?;
    mat_exp(&psi_ol_inv(&chart.fwd(c)?)?)
}

/// `Φ_LS(X) = π₁(exp(Bᵀ log X B))`.
pub fn phi_ls<T: Real>(x: &SymMat<T>, cfg: &SolverConfig<T>) -> Result<SymMat<T>> {
    let chart = LogScalingChart::with_solver(x.n() + 1, cfg.newton)?;
    chart.inv(&psi_ls(&mat_log(x)?))
}

/// `Φ_LS⁻¹(C) = exp(B Log•(C) Bᵀ)`.
pub fn phi_ls_inv<T: Real>(c: &SymMat<T>, cfg: &SolverConfig<T>) -> Result<SymMat<T>> {
    let chart = LogScalingChart::with_solver(c.n(), cfg.newton)?;
    mat_exp(&psi_ls_inv(&chart.fwd(c)?)?)
}

/// Isometry from the off-log to the log-scaling structure, `Φ_LS ∘ Φ_OL⁻¹`.
pub fn phi_ol_to_ls<T: Real>(c: &SymMat<T>, cfg: &SolverConfig<T>) -> Result<SymMat<T>> {
    phi_ls(&phi_ol_inv(c, cfg)?, cfg)
}

/// Inverse of [`phi_ol_to_ls`].
pub fn phi_ls_to_ol<T: Real>(c: &SymMat<T>, cfg: &SolverConfig<T>) -> Result<SymMat<T>> {
    phi_ol(&phi_ls_inv(c, cfg)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::pi1;
    use crate::sample::{random_row_zero, random_spd, random_sym, CounterRng};
    use crate::spd::SpdChart;
    use crate::symlin::{dlog, Subspace};

    #[test]
    fn psi_ol_golden_example() {
        let x = SymMat::from_rows(&[
            [1.0, 5.0, 6.0, 7.0],
            [5.0, 2.0, 8.0, 9.0],
            [6.0, 8.0, 3.0, 10.0],
            [7.0, 9.0, 10.0, 4.0],
        ])
        .unwrap();
        let h = psi_ol(&x);
        let r2 = 2f64.sqrt();
        let want = [
            [0.0, 1.0 / r2, 2.0 / r2, 3.0 / r2, 4.0 / r2],
            [1.0 / r2, 0.0, 5.0, 6.0, 7.0],
            [2.0 / r2, 5.0, 0.0, 8.0, 9.0],
            [3.0 / r2, 6.0, 8.0, 0.0, 10.0],
            [4.0 / r2, 7.0, 9.0, 10.0, 0.0],
        ];
        assert_eq!(h, SymMat::from_rows(&want).unwrap());
        assert_eq!(psi_ol_inv(&h).unwrap(), x);
        assert_eq!(psi_ol(&SymMat::<f64>::zeros(3)), SymMat::zeros(4));
    }

    #[test]
    fn linear_layers_preserve_norm() {
        let mut rng = CounterRng::new(1);
        for m in 1..7 {
            let s = random_sym::<f64>(&mut rng, m, 1.0);
            let ol = psi_ol(&s);
            let ls = psi_ls(&s);
            assert!((ol.fro_norm() - s.fro_norm()).abs() < 1e-13);
            assert!((ls.fro_norm() - s.fro_norm()).abs() < 1e-13);
            assert!(Subspace::Hollow.residual(&ol) == 0.0);
            assert!(Subspace::RowZero.residual(&ls) < 1e-14);
            assert!((&psi_ls_inv(&ls).unwrap() - &s).max_abs() < 1e-14);
            let r = random_row_zero::<f64>(&mut rng, m + 1, 1.0);
            assert!((&psi_ls(&psi_ls_inv(&r).unwrap()) - &r).max_abs() < 1e-14);
        }
    }

    #[test]
    fn helmert_rows_and_identities() {
        let b2 = Helmert::<f64>::new(2).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert_eq!(b2.matrix().as_slice(), &[r, -r]);
        let b3 = Helmert::<f64>::new(3).unwrap();
        let s6 = 6f64.sqrt();
        assert_eq!(b3.matrix().row(1), &[1.0 / s6, 1.0 / s6, -2.0 / s6]);
        let one = SymMat::<f64>::identity(1);
        let want = SymMat::from_rows(&[[0.5, -0.5], [-0.5, 0.5]]).unwrap();
        assert!((&psi_ls(&one) - &want).max_abs() < 1e-15);
        for n in 2..=10 {
            let b = Helmert::<f64>::new(n).unwrap();
            let bm = b.matrix();
            let ones = vec![1.0; n];
            assert!(bm.matvec(&ones).iter().all(|x| x.abs() < 1e-14));
            let bbt = bm.matmul(&bm.transpose());
            assert!(bbt.sub(&Mat::identity(n - 1)).max_abs() < 1e-14);
            let btb = bm.transpose().matmul(bm);
            let centring = Mat::from_fn(n, n, |i, j| (i == j) as u8 as f64 - 1.0 / n as f64);
            assert!(btb.sub(&centring).max_abs() < 1e-14);
        }
    }

    #[test]
    fn integrated_maps_are_isometric_homomorphisms() {
        let cfg = SolverConfig::default();
        let mut rng = CounterRng::new(2);
        for m in 2..6 {
            let spd = SpdChart::new(m).unwrap();
            let ol = OffLogChart::<f64>::new(m + 1).unwrap();
            let ls = LogScalingChart::<f64>::new(m + 1).unwrap();
            let x = random_spd::<f64>(&mut rng, m, 0.4);
            let y = random_spd::<f64>(&mut rng, m, 0.4);
            let d = spd.dist(&x, &y).unwrap();
            let (ox, oy) = (phi_ol(&x, &cfg).unwrap(), phi_ol(&y, &cfg).unwrap());
            let (lx, ly) = (phi_ls(&x, &cfg).unwrap(), phi_ls(&y, &cfg).unwrap());
            assert!((ol.dist(&ox, &oy).unwrap() - d).abs() <= 1e-8 * (1.0 + d));
            assert!((ls.dist(&lx, &ly).unwrap() - d).abs() <= 1e-8 * (1.0 + d));
            let xy = spd.star(&x, &y).unwrap();
            let hom_ol = &phi_ol(&xy, &cfg).unwrap() - &ol.star(&ox, &oy).unwrap();
            let hom_ls = &phi_ls(&xy, &cfg).unwrap() - &ls.star(&lx, &ly).unwrap();
            assert!(hom_ol.fro_norm() < 1e-8 && hom_ls.fro_norm() < 1e-8);
            assert!((&phi_ol_inv(&ox, &cfg).unwrap() - &x).fro_norm() < 1e-9);
            assert!((&phi_ls_inv(&lx, &cfg).unwrap() - &x).fro_norm() < 1e-9);
            let cross = phi_ol_to_ls(&ox, &cfg).unwrap();
            assert!((&cross - &lx).fro_norm() < 1e-8);
            assert!((&phi_ls_to_ol(&cross, &cfg).unwrap() - &ox).fro_norm() < 1e-8);
        }
        let id = SymMat::<f64>::identity(3);
        assert!((&phi_ol(&id, &cfg).unwrap() - &SymMat::identity(4)).max_abs() < 1e-15);
        assert!((&phi_ls(&id, &cfg).unwrap() - &SymMat::identity(4)).max_abs() < 1e-15);
        assert_eq!(pi1(&id).unwrap(), id);
    }

    #[test]
    fn pushforward_matches_finite_difference() {
        // d log_H ∘ dΦ = ψ ∘ d log_G
        let cfg = SolverConfig::default();
        let mut rng = CounterRng::new(3);
        let x = random_spd::<f64>(&mut rng, 3, 0.4);
        let v = random_sym::<f64>(&mut rng, 3, 1.0);
        let h = 1e-5;
        let p = phi_ol(&(&x + &v.scale(h)), &cfg).unwrap();
        let m = phi_ol(&(&x - &v.scale(h)), &cfg).unwrap();
        let dphi = (&p - &m).scale(0.5 / h);
        let ol = OffLogChart::<f64>::new(4).unwrap();
        let lhs = ol.dfwd(&phi_ol(&x, &cfg).unwrap(), &dphi).unwrap();
        let rhs = psi_ol(&dlog(&x, &v).unwrap());
        assert!((&lhs - &rhs).fro_norm() <= 1e-6 * rhs.fro_norm());
        // and the chart-side formula agrees with it
        let via_charts = ol.dinv(&psi_ol(&mat_log(&x).unwrap()), &rhs).unwrap();
        assert!((&via_charts - &dphi).fro_norm() <= 1e-6 * dphi.fro_norm());
    }
}
