//! Dense symmetric linear algebra: storage, eigendecomposition, matrix
//! exponential and logarithm together with their Fréchet derivatives.

mod eig;
mod funcs;
mod mat;

pub use eig::{sym_eig, SymEig};
pub use funcs::{
    check_positive_definite, dexp, dexp_with, divided_diff_exp, divided_diff_log, dlog, dlog_with,
    mat_exp, mat_log, solve_spd, spd_inverse,
};
pub use mat::{diag_project, frobenius, off_project, Mat, Subspace, SymMat};
