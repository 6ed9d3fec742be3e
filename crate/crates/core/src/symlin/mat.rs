use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative asymmetry above which user input is rejected instead of averaged.
const ASYMMETRY_TOL: f64 = 1e-8;

/// Dense row-major matrix of arbitrary shape.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn matmul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn fro_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl<T: Real> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Linear subspaces of `S(n)` used as chart model spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    Full,
    /// Zero diagonal.
    Hollow,
    /// Every row sums to zero.
    RowZero,
    Diagonal,
}

impl Subspace {
    /// Largest violation of the subspace constraint.
    pub fn residual<T: Real>(self, a: &SymMat<T>) -> T {
        let n = a.n();
        match self {
            Subspace::Full => T::zero(),
            Subspace::Hollow => (0..n).fold(T::zero(), |m, i| m.max(a.get(i, i).abs())),
            Subspace::RowZero => a.row_sums().into_iter().fold(T::zero(), |m, s| m.max(s.abs())),
            Subspace::Diagonal => {
                let mut m = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m = m.max(a.get(i, j).abs());
                        }
                    }
                }
                m
            }
        }
    }

    pub fn contains<T: Real>(self, a: &SymMat<T>, tol: T) -> bool {
        self.residual(a) <= tol
    }

    /// Dimension of the subspace inside `S(n)`.
    pub fn dim(self, n: usize) -> usize {
        match self {
            Subspace::Full => n * (n + 1) / 2,
            Subspace::Hollow | Subspace::RowZero => n * (n - 1) / 2,
            Subspace::Diagonal => n,
        }
    }
}

/// Dense symmetric `n x n` matrix. Storage is full and exactly symmetric.
#[derive(Clone, PartialEq)]
pub struct SymMat<T> {
    inner: Mat<T>,
}

impl<T: Real> SymMat<T> {
    /// Builds from row-major data, rejecting asymmetry beyond `1e-8` relative
    /// and averaging away anything smaller.
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let m = Mat::from_vec(n, n, data)?;
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let scale = T::one().max(m.max_abs());
        let mut asym = T::zero();
        for i in 0..n {
            for j in 0..i {
                asym = asym.max((m.get(i, j) - m.get(j, i)).abs());
            }
        }
        if asym > T::lit(ASYMMETRY_TOL) * scale {
            return Err(Error::NotSymmetric {
                asymmetry: asym.as_f64(),
            });
        }
        Ok(Self::symmetrize(m))
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(n, data)
    }

    /// Averages `m` with its transpose. Panics if `m` is not square.
    pub fn symmetrize(m: Mat<T>) -> Self {
        assert_eq!(m.rows(), m.cols(), "symmetrize needs a square matrix");
        let n = m.rows();
        let half = T::lit(0.5);
        let mut out = m;
        for i in 0..n {
            for j in 0..i {
                let v = (out.get(i, j) + out.get(j, i)) * half;
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        SymMat { inner: out }
    }

    /// Builds from the upper triangle of `f` (`f(i, j)` for `i <= j`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        SymMat { inner: m }
    }

    pub fn zeros(n: usize) -> Self {
        SymMat {
            inner: Mat::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        SymMat {
            inner: Mat::identity(n),
        }
    }

    pub fn from_diag(d: &[T]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { T::zero() })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.inner.get(i, j)
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.inner
    }

    pub fn into_mat(self) -> Mat<T> {
        self.inner
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.inner.row(i).iter().copied().sum()).collect()
    }

    pub fn trace(&self) -> T {
        self.diag().into_iter().sum()
    }

    pub fn map(&self, mut f: impl FnMut(T) -> T) -> Self {
        Self::from_fn(self.n(), |i, j| f(self.get(i, j)))
    }

    pub fn zip_with(&self, other: &SymMat<T>, mut f: impl FnMut(T, T) -> T) -> Self {
        assert_eq!(self.n(), other.n(), "dimension mismatch");
        Self::from_fn(self.n(), |i, j| f(self.get(i, j), other.get(i, j)))
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    /// `off(A)`: the diagonal set to zero.
    pub fn off(&self) -> Self {
        Self::from_fn(self.n(), |i, j| if i == j { T::zero() } else { self.get(i, j) })
    }

    /// `Diag(A)`: the off-diagonal set to zero.
    pub fn diag_part(&self) -> Self {
        Self::from_diag(&self.diag())
    }

    /// `D A D` for `D = diag(d)`.
    pub fn scale_diag(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.n());
        Self::from_fn(self.n(), |i, j| d[i] * self.get(i, j) * d[j])
    }

    /// Congruence `Mᵀ A M` for an `n x m` matrix `M`.
    pub fn congruence(&self, m: &Mat<T>) -> Self {
        assert_eq!(m.rows(), self.n(), "congruence shape mismatch");
        let am = self.inner.matmul(m);
        let out = m.transpose().matmul(&am);
        Self::symmetrize(out)
    }

    /// Plain (generally non-symmetric) product.
    pub fn matmul(&self, rhs: &SymMat<T>) -> Mat<T> {
        self.inner.matmul(&rhs.inner)
    }

    pub fn fro_norm(&self) -> T {
        self.inner.fro_norm()
    }

    pub fn max_abs(&self) -> T {
        self.inner.max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n()).map(|i| self.inner.row(i).to_vec()).collect()
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.n(),
            });
        }
        Ok(())
    }
}

impl<T: Real> Index<(usize, usize)> for SymMat<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.inner[idx]
    }
}

impl<T: fmt::Debug> fmt::Debug for SymMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.inner)
    }
}

impl<T: Real> Add for &SymMat<T> {
    type Output = SymMat<T>;
    fn add(self, rhs: Self) -> SymMat<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &SymMat<T> {
    type Output = SymMat<T>;
    fn sub(self, rhs: Self) -> SymMat<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Real> Neg for &SymMat<T> {
    type Output = SymMat<T>;
    fn neg(self) -> SymMat<T> {
        self.map(|x| -x)
    }
}

impl<T: Real> Mul<T> for &SymMat<T> {
    type Output = SymMat<T>;
    fn mul(self, s: T) -> SymMat<T> {
        self.scale(s)
    }
}

/// Frobenius inner product `tr(AB)`.
pub fn frobenius<T: Real>(a: &SymMat<T>, b: &SymMat<T>) -> Result<T> {
    b.check_dim(a.n())?;
    Ok(a.as_mat()
        .as_slice()
        .iter()
        .zip(b.as_mat().as_slice())
        .map(|(&x, &y)| x * y)
        .sum())
}

/// `off(A)`, see [`SymMat::off`].
pub fn off_project<T: Real>(a: &SymMat<T>) -> SymMat<T> {
    a.off()
}

/// `Diag(A)`, see [`SymMat::diag_part`].
pub fn diag_project<T: Real>(a: &SymMat<T>) -> SymMat<T> {
    a.diag_part()
}
