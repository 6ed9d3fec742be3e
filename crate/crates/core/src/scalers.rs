//! Diagonal normalisers.
//!
//! * [`solve_d`]: for symmetric `S`, the unique diagonal `D(S)` with
//!   `exp(D(S) + S)` unit-diagonal, by the additive fixed-point iteration
//!   `D ← D − log Diag(exp(D + S))` from `D = 0`.
//! * [`solve_dstar`]: for SPD `Σ`, the unique positive diagonal `D*` with
//!   `log(D* Σ D*)` row-sum-zero, as the minimiser of the strictly convex
//!   `F(d) = ½ dᵀΣd − Σ log dᵢ` (damped Newton).

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symlin::{
    check_positive_definite, dexp_with, divided_diff_exp, mat_exp, solve_spd, sym_eig, SymEig,
    SymMat,
};

/// H⁰ systems with a larger condition number are rejected.
const MAX_H0_CONDITION: f64 = 1e12;
/// Sufficient-decrease constant of the Armijo rule.
const ARMIJO_C: f64 = 1e-4;
/// Below this Newton decrement a full step is feasible and quadratically convergent.
const FULL_STEP_DECREMENT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig<T> {
    /// Stop once `‖D_k − D_{k−1}‖ ≤ eps`.
    pub eps: T,
    pub max_iter: usize,
}

impl<T: Real> Default for FixedPointConfig<T> {
    fn default() -> Self {
        FixedPointConfig {
            eps: T::tol(1e-12),
            max_iter: 200,
        }
    }
}

impl<T: Real> FixedPointConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > T::zero()) || self.max_iter == 0 {
            return Err(Error::InvalidConfig(format!(
                "fixed point needs eps > 0 and max_iter >= 1 (got {}, {})",
                self.eps, self.max_iter
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    /// Gradient-norm threshold.
    pub tol: T,
    pub max_iter: usize,
    /// Backtracking factor in `(0, 1)`.
    pub armijo: T,
}

impl<T: Real> Default for NewtonConfig<T> {
    fn default() -> Self {
        NewtonConfig {
            tol: T::tol(1e-12),
            max_iter: 100,
            armijo: T::lit(0.5),
        }
    }
}

impl<T: Real> NewtonConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero())
            || self.max_iter == 0
            || !(self.armijo > T::zero() && self.armijo < T::one())
        {
            return Err(Error::InvalidConfig(format!(
                "newton needs tol > 0, max_iter >= 1, armijo in (0,1) (got {}, {}, {})",
                self.tol, self.max_iter, self.armijo
            )));
        }
        Ok(())
    }
}

/// Solver settings for every map that hides a normaliser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub fixed_point: FixedPointConfig<T>,
    pub newton: NewtonConfig<T>,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            fixed_point: FixedPointConfig::default(),
            newton: NewtonConfig::default(),
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.fixed_point.validate()?;
        self.newton.validate()
    }
}

/// A diagonal solution plus solver diagnostics.
#[derive(Debug, Clone)]
pub struct Scaling<T> {
    pub diag: Vec<T>,
    pub iterations: usize,
    /// Final step norm (fixed point) or gradient norm (Newton).
    pub residual: T,
    /// Objective after every accepted Newton iterate; empty for the fixed point.
    pub objective_trace: Vec<T>,
}

impl<T: Real> Scaling<T> {
    pub fn matrix(&self) -> SymMat<T> {
        SymMat::from_diag(&self.diag)
    }
}

fn add_diag<T: Real>(s: &SymMat<T>, d: &[T]) -> SymMat<T> {
    SymMat::from_fn(s.n(), |i, j| if i == j { s.get(i, i) + d[i] } else { s.get(i, j) })
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// `D(S)` from the zero start.
pub fn solve_d<T: Real>(s: &SymMat<T>, cfg: &FixedPointConfig<T>) -> Result<Scaling<T>> {
    solve_d_from(s, &vec![T::zero(); s.n()], cfg)
}

/// `D(S)` from an arbitrary diagonal start `d0`.
pub fn solve_d_from<T: Real>(
    s: &SymMat<T>,
    d0: &[T],
    cfg: &FixedPointConfig<T>,
) -> Result<Scaling<T>> {
    cfg.validate()?;
    if d0.len() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: d0.len(),
        });
    }
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut d = d0.to_vec();
    let mut step_norm = T::infinity();
    for k in 1..=cfg.max_iter {
        let e = mat_exp(&add_diag(s, &d))?;
        let step: Vec<T> = e.diag().into_iter().map(|x| -x.ln()).collect();
        for (di, si) in d.iter_mut().zip(&step) {
            *di += *si;
        }
        step_norm = norm(&step);
        if !step_norm.is_finite() {
            break;
        }
        if step_norm <= cfg.eps {
            return Ok(Scaling {
                diag: d,
                iterations: k,
                residual: step_norm,
                objective_trace: Vec::new(),
            });
        }
    }
    Err(Error::NoConvergence {
        solver: "unit-diagonal fixed point",
        iterations: cfg.max_iter,
        residual: step_norm.as_f64(),
    })
}

/// `H⁰_{il} = Σ_{j,k} P_ij P_ik P_lj P_lk exp⁽¹⁾(δ_j, δ_k)` for `D(S) + S = P diag(δ) Pᵀ`.
///
/// This is the Jacobian of `z ↦ diag(exp(A + diag z))` at `z = 0`.
pub fn h0_matrix<T: Real>(eig: &SymEig<T>) -> SymMat<T> {
    let n = eig.n();
    let p = &eig.vectors;
    let mut dd = vec![T::zero(); n * n];
    for j in 0..n {
        for k in 0..n {
            dd[j * n + k] = divided_diff_exp(eig.values[j], eig.values[k]);
        }
    }
    SymMat::from_fn(n, |i, l| {
        let u: Vec<T> = (0..n).map(|j| p.get(i, j) * p.get(l, j)).collect();
        let mut acc = T::zero();
        for j in 0..n {
            for k in 0..n {
                acc += u[j] * u[k] * dd[j * n + k];
            }
        }
        acc
    })
}

/// `d_S D(Y) = −Diag((H⁰)⁻¹ diag(d_A exp(Y)))` given the eigendecomposition
/// of `A = D(S) + S`.
pub fn d_derivative_at<T: Real>(eig: &SymEig<T>, y: &SymMat<T>) -> Result<SymMat<T>> {
    y.check_dim(eig.n())?;
    let h0 = h0_matrix(eig);
    let h_eig = sym_eig(&h0)?;
    let condition = h_eig.max() / h_eig.min();
    if !(h_eig.min() > T::zero()) || condition > T::lit(MAX_H0_CONDITION) {
        return Err(Error::SingularH0 {
            condition: condition.as_f64(),
        });
    }
    let rhs = dexp_with(eig, y).diag();
    let z = solve_spd(&h0, &rhs).map_err(|_| Error::SingularH0 {
        condition: condition.as_f64(),
    })?;
    Ok(SymMat::from_diag(&z.into_iter().map(|x| -x).collect::<Vec<_>>()))
}

/// Directional derivative of `S ↦ D(S)` in direction `Y`.
pub fn d_derivative<T: Real>(
    s: &SymMat<T>,
    y: &SymMat<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<SymMat<T>> {
    let d = solve_d(s, cfg)?;
    let eig = sym_eig(&add_diag(s, &d.diag))?;
    d_derivative_at(&eig, y)
}

/// `F(d) = ½ dᵀΣd − Σ log dᵢ`; `+∞` outside the positive orthant.
pub fn dstar_objective<T: Real>(sigma: &SymMat<T>, d: &[T]) -> T {
    if d.iter().any(|&x| !(x > T::zero())) {
        return T::infinity();
    }
    let sd = sigma.as_mat().matvec(d);
    let quad: T = sd.iter().zip(d).map(|(&a, &b)| a * b).sum();
    T::lit(0.5) * quad - d.iter().map(|x| x.ln()).sum::<T>()
}

/// `D*(Σ)` from the correlation rescaling `d₀ = diag(Σ)^{-1/2}`.
pub fn solve_dstar<T: Real>(sigma: &SymMat<T>, cfg: &NewtonConfig<T>) -> Result<Scaling<T>> {
    let d0: Vec<T> = sigma.diag().into_iter().map(|x| x.sqrt().recip()).collect();
    solve_dstar_from(sigma, &d0, cfg)
}

/// `D*(Σ)` from an arbitrary positive start.
///
/// Converged once `‖∇F‖ ≤ tol · max(1, ‖d⁻¹‖_∞)`, i.e. relative to the
/// magnitude of the barrier term when `Σ` is badly scaled.
pub fn solve_dstar_from<T: Real>(
    sigma: &SymMat<T>,
    d0: &[T],
    cfg: &NewtonConfig<T>,
) -> Result<Scaling<T>> {
    cfg.validate()?;
    let n = sigma.n();
    if d0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d0.len(),
        });
    }
    if d0.iter().any(|&x| !(x > T::zero() && x.is_finite())) {
        return Err(Error::InvalidConfig("newton start must be positive".into()));
    }
    check_positive_definite(&sym_eig(sigma)?)?;

    let mut d = d0.to_vec();
    let mut f = dstar_objective(sigma, &d);
    let mut trace = vec![f];
    let mut grad_norm = T::infinity();
    for it in 0..=cfg.max_iter {
        let sd = sigma.as_mat().matvec(&d);
        let grad: Vec<T> = sd.iter().zip(&d).map(|(&a, &x)| a - x.recip()).collect();
        grad_norm = norm(&grad);
        let scale = d.iter().fold(T::one(), |m, &x| m.max(x.recip()));
        if grad_norm <= cfg.tol * scale {
            return Ok(Scaling {
                diag: d,
                iterations: it,
                residual: grad_norm,
                objective_trace: trace,
            });
        }
        if it == cfg.max_iter || !grad_norm.is_finite() {
            break;
        }
        let hess = SymMat::from_fn(n, |i, j| {
            if i == j {
                sigma.get(i, i) + (d[i] * d[i]).recip()
            } else {
                sigma.get(i, j)
            }
        });
        let neg_grad: Vec<T> = grad.iter().map(|&g| -g).collect();
        let step = solve_spd(&hess, &neg_grad)?;
        let slope: T = grad.iter().zip(&step).map(|(&g, &p)| g * p).sum();
        let decrement = (-slope).max(T::zero()).sqrt();

        let mut alpha = T::one();
        let (next, f_next) = loop {
            let cand: Vec<T> = d.iter().zip(&step).map(|(&x, &p)| x + alpha * p).collect();
            let f_cand = dstar_objective(sigma, &cand);
            let positive = f_cand.is_finite();
            if positive
                && (decrement < T::lit(FULL_STEP_DECREMENT)
                    || f_cand <= f + T::lit(ARMIJO_C) * alpha * slope)
            {
                break (cand, f_cand);
            }
            alpha *= cfg.armijo;
            if alpha < T::epsilon() {
                return Err(Error::NoConvergence {
                    solver: "row-sum newton (line search)",
                    iterations: it,
                    residual: grad_norm.as_f64(),
                });
            }
        };
        d = next;
        f = f_next;
        trace.push(f);
    }
    Err(Error::NoConvergence {
        solver: "row-sum newton",
        iterations: cfg.max_iter,
        residual: grad_norm.as_f64(),
    })
}
