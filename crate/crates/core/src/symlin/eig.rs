use crate::error::{Error, Result};
use crate::scalar::Real;

use super::mat::{Mat, SymMat};

const MAX_SWEEPS: usize = 100;

/// Orthogonal eigendecomposition `A = P diag(values) Pᵀ`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEig<T> {
    /// Columns are eigenvectors.
    pub vectors: Mat<T>,
    pub values: Vec<T>,
}

/// Cyclic Jacobi eigensolver (Rutishauser's variant with threshold sweeps).
///
/// Jacobi is slower than tridiagonal QR for large `n` but delivers eigenvectors
/// orthogonal to working precision and small eigenvalues to high relative
/// accuracy, which the divided-difference kernels rely on.
pub fn sym_eig<T: Real>(a: &SymMat<T>) -> Result<SymEig<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.n();
    let mut m: Vec<Vec<T>> = a.to_rows();
    let mut v = Mat::<T>::identity(n);
    let mut d: Vec<T> = a.diag();
    let mut b = d.clone();
    let mut z = vec![T::zero(); n];
    let hundred = T::lit(100.0);

    let mut converged = n == 1;
    for sweep in 0..MAX_SWEEPS {
        let mut sm = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                sm += m[p][q].abs();
            }
        }
        if sm == T::zero() {
            converged = true;
            break;
        }
        let tresh = if sweep < 3 {
            T::lit(0.2) * sm / T::lit((n * n) as f64)
        } else {
            T::zero()
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                let g = hundred * apq.abs();
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    m[p][q] = T::zero();
                } else if apq.abs() > tresh {
                    let h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        apq / h
                    } else {
                        let theta = T::lit(0.5) * h / apq;
                        let t = T::one() / (theta.abs() + (T::one() + theta * theta).sqrt());
                        if theta < T::zero() {
                            -t
                        } else {
                            t
                        }
                    };
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (T::one() + c);
                    let h = t * apq;
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    m[p][q] = T::zero();
                    let rot = |x: T, y: T| (x - s * (y + x * tau), y + s * (x - y * tau));
                    for j in 0..p {
                        let (x, y) = rot(m[j][p], m[j][q]);
                        m[j][p] = x;
                        m[j][q] = y;
                    }
                    for j in p + 1..q {
                        let (x, y) = rot(m[p][j], m[j][q]);
                        m[p][j] = x;
                        m[j][q] = y;
                    }
                    for j in q + 1..n {
                        let (x, y) = rot(m[p][j], m[q][j]);
                        m[p][j] = x;
                        m[q][j] = y;
                    }
                    for j in 0..n {
                        let (x, y) = rot(v.get(j, p), v.get(j, q));
                        v.set(j, p, x);
                        v.set(j, q, y);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = T::zero();
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            solver: "jacobi eigensolver",
            iterations: MAX_SWEEPS,
            residual: f64::NAN,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(SymEig { vectors, values })
}

impl<T: Real> SymEig<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn max(&self) -> T {
        self.values[self.n() - 1]
    }

    /// `P diag(f(values)) Pᵀ`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> SymMat<T> {
        let fv: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        let p = &self.vectors;
        SymMat::from_fn(self.n(), |i, j| {
            (0..self.n()).map(|k| p.get(i, k) * fv[k] * p.get(j, k)).sum()
        })
    }

    /// Daleckii–Krein form `P ((Pᵀ V P) ⊙ K) Pᵀ` with `K[j][k] = kernel(λ_j, λ_k)`.
    pub fn sandwich(&self, v: &SymMat<T>, kernel: impl Fn(T, T) -> T) -> SymMat<T> {
        let n = self.n();
        let p = &self.vectors;
        let mut inner = v.congruence(p).into_mat();
        for j in 0..n {
            for k in 0..n {
                let x = inner.get(j, k) * kernel(self.values[j], self.values[k]);
                inner.set(j, k, x);
            }
        }
        SymMat::symmetrize(inner).congruence(&p.transpose())
    }

    /// `‖PᵀP − I‖_F`.
    pub fn orthogonality_defect(&self) -> T {
        let p = &self.vectors;
        p.transpose().matmul(p).sub(&Mat::identity(self.n())).fro_norm()
    }
}
