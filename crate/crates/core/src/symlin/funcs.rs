use crate::error::{Error, Result};
use crate::scalar::Real;

use super::eig::{sym_eig, SymEig};
use super::mat::SymMat;

/// Relative width below which divided differences switch to their analytic limit.
const DD_THRESHOLD: f64 = 1e-8;
/// Eigenvalues at or below `PD_FLOOR * max eigenvalue` count as singular.
const PD_FLOOR: f64 = 1e-12;

/// First divided difference of `exp`: `(e^a − e^b)/(a − b)`, `e^a` at `a = b`.
pub fn divided_diff_exp<T: Real>(a: T, b: T) -> T {
    let d = a - b;
    let width = T::lit(DD_THRESHOLD) * T::one().max(a.abs()).max(b.abs());
    if d.abs() < width {
        // midpoint limit, second-order accurate in d
        return ((a + b) * T::lit(0.5)).exp();
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    let gap = hi - lo;
    hi.exp() * -(-gap).exp_m1() / gap
}

/// First divided difference of `log` on `(0, ∞)`: `(log a − log b)/(a − b)`, `1/a` at `a = b`.
pub fn divided_diff_log<T: Real>(a: T, b: T) -> T {
    let d = a - b;
    if d.abs() < T::lit(DD_THRESHOLD) * a.abs().max(b.abs()) {
        return T::lit(2.0) / (a + b);
    }
    (d / b).ln_1p() / d
}

/// Errors unless every eigenvalue exceeds `1e-12 * max eigenvalue`.
pub fn check_positive_definite<T: Real>(eig: &SymEig<T>) -> Result<()> {
    let (lo, hi) = (eig.min(), eig.max());
    if hi <= T::zero() || lo <= T::lit(PD_FLOOR) * hi {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: lo.as_f64(),
            max_eigenvalue: hi.as_f64(),
        });
    }
    Ok(())
}

fn check_exp_range<T: Real>(eig: &SymEig<T>) -> Result<()> {
    let top = eig.max();
    if top > T::max_value().ln() {
        return Err(Error::Overflow {
            eigenvalue: top.as_f64(),
        });
    }
    Ok(())
}

pub fn mat_exp<T: Real>(s: &SymMat<T>) -> Result<SymMat<T>> {
    let eig = sym_eig(s)?;
    check_exp_range(&eig)?;
    Ok(eig.apply(T::exp))
}

pub fn mat_log<T: Real>(sigma: &SymMat<T>) -> Result<SymMat<T>> {
    let eig = sym_eig(sigma)?;
    check_positive_definite(&eig)?;
    Ok(eig.apply(T::ln))
}

/// Directional derivative `d_S exp(V)`.
pub fn dexp<T: Real>(s: &SymMat<T>, v: &SymMat<T>) -> Result<SymMat<T>> {
    v.check_dim(s.n())?;
    let eig = sym_eig(s)?;
    check_exp_range(&eig)?;
    Ok(dexp_with(&eig, v))
}

/// [`dexp`] at a point whose eigendecomposition is already known.
pub fn dexp_with<T: Real>(eig: &SymEig<T>, v: &SymMat<T>) -> SymMat<T> {
    eig.sandwich(v, divided_diff_exp)
}

/// Directional derivative `d_Σ log(W)`.
pub fn dlog<T: Real>(sigma: &SymMat<T>, w: &SymMat<T>) -> Result<SymMat<T>> {
    w.check_dim(sigma.n())?;
    let eig = sym_eig(sigma)?;
    check_positive_definite(&eig)?;
    Ok(dlog_with(&eig, w))
}

pub fn dlog_with<T: Real>(eig: &SymEig<T>, w: &SymMat<T>) -> SymMat<T> {
    eig.sandwich(w, divided_diff_log)
}

/// Inverse of a positive-definite matrix through its eigendecomposition.
pub fn spd_inverse<T: Real>(sigma: &SymMat<T>) -> Result<SymMat<T>> {
    let eig = sym_eig(sigma)?;
    check_positive_definite(&eig)?;
    Ok(eig.apply(|x| x.recip()))
}

/// Solves `A x = b` for positive-definite `A` by Cholesky factorisation.
pub fn solve_spd<T: Real>(a: &SymMat<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut diag = a.get(j, j);
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !(diag > T::zero()) {
            return Err(Error::SingularSystem);
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[i * n + k] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let t = l[k * n + i] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &SymMat<f64>, b: &SymMat<f64>, tol: f64) -> bool {
        (a - b).fro_norm() <= tol
    }

    #[test]
    fn exp_examples() {
        assert_eq!(mat_exp(&SymMat::<f64>::zeros(2)).unwrap(), SymMat::identity(2));
        let s = SymMat::<f64>::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let (c, sh) = (1f64.cosh(), 1f64.sinh());
        let want = SymMat::from_rows(&[[c, sh], [sh, c]]).unwrap();
        assert!(close(&mat_exp(&s).unwrap(), &want, 1e-15));
        let d = SymMat::from_diag(&[4f64.ln(), 9f64.ln()]);
        assert!(close(&mat_exp(&d).unwrap(), &SymMat::from_diag(&[4.0, 9.0]), 1e-14));
    }

    #[test]
    fn exp_overflow() {
        let s = SymMat::<f64>::from_diag(&[800.0, 0.0]);
        assert!(matches!(mat_exp(&s), Err(Error::Overflow { .. })));
    }

    #[test]
    fn log_examples() {
        assert_eq!(mat_log(&SymMat::<f64>::identity(4)).unwrap(), SymMat::zeros(4));
        let rho = 0.5f64;
        let c = SymMat::from_rows(&[[1.0, rho], [rho, 1.0]]).unwrap();
        let l = mat_log(&c).unwrap();
        assert!((l.get(0, 1) - 0.549_306_144_334_054_8).abs() < 1e-15);
        assert!((l.get(0, 0) - (-0.143_841_036_225_890_2)).abs() < 1e-15);
        assert!((l.get(0, 1) - rho.atanh()).abs() < 1e-15);
        assert!((l.get(1, 1) - 0.5 * (1.0 - rho * rho).ln()).abs() < 1e-15);
        let d = mat_log(&SymMat::from_diag(&[4.0, 9.0])).unwrap();
        assert!(close(&d, &SymMat::from_diag(&[4f64.ln(), 9f64.ln()]), 1e-15));
    }

    #[test]
    fn log_rejects_indefinite() {
        let a = SymMat::<f64>::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(mat_log(&a), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(
            dlog(&a, &SymMat::identity(2)),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn derivative_identity_and_diagonal_cases() {
        let v = SymMat::<f64>::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]])
            .unwrap();
        assert!(close(&dexp(&SymMat::zeros(3), &v).unwrap(), &v, 1e-15));
        assert!(close(&dlog(&SymMat::identity(3), &v).unwrap(), &v, 1e-15));

        let s = SymMat::from_diag(&[0.3, -1.2, 2.0]);
        let vd = SymMat::from_diag(&[1.5, -0.5, 2.0]);
        let got = dexp(&s, &vd).unwrap();
        let want = SymMat::from_diag(&[0.3f64.exp() * 1.5, (-1.2f64).exp() * -0.5, 2f64.exp() * 2.0]);
        assert!(close(&got, &want, 1e-13));

        let sig = SymMat::from_diag(&[0.5, 2.0, 4.0]);
        let got = dlog(&sig, &vd).unwrap();
        let want = SymMat::from_diag(&[1.5 / 0.5, -0.5 / 2.0, 2.0 / 4.0]);
        assert!(close(&got, &want, 1e-15));
    }

    #[test]
    fn divided_differences_are_continuous_across_the_threshold() {
        for &a in &[-3.0f64, 0.0, 1e-3, 2.5] {
            for &h in &[1e-6, 1e-8, 1e-9, 1e-12, 0.0] {
                let exact = a.exp() * (1.0 + h / 2.0 + h * h / 6.0);
                assert!((divided_diff_exp(a + h, a) - exact).abs() <= 1e-14 * exact.max(1.0));
            }
        }
        for &a in &[1e-6f64, 0.3, 7.0] {
            for &r in &[1e-6, 1e-9, 1e-12, 0.0] {
                let b = a * (1.0 + r);
                let exact = (1.0 - r / 2.0 + r * r / 3.0) / a;
                assert!((divided_diff_log(b, a) - exact).abs() <= 1e-13 * exact);
            }
        }
        // widely separated arguments do not overflow prematurely
        assert!(divided_diff_exp(400.0f64, -400.0).is_finite());
        // small eigenvalues far apart in relative terms
        let (a, b) = (1e-10f64, 5e-9f64);
        let want = (b.ln() - a.ln()) / (b - a);
        assert!((divided_diff_log(a, b) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn cholesky_solve_and_inverse() {
        let a = SymMat::<f64>::from_rows(&[[4.0, 1.0], [1.0, 3.0]]).unwrap();
        let x = solve_spd(&a, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-15);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-15);
        let inv = spd_inverse(&a).unwrap();
        let prod = a.matmul(&inv);
        assert!((prod.get(0, 0) - 1.0).abs() < 1e-15 && prod.get(0, 1).abs() < 1e-15);
        let bad = SymMat::<f64>::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert_eq!(solve_spd(&bad, &[1.0, 1.0]).unwrap_err(), Error::SingularSystem);
    }
}
