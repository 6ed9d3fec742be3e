//! Log-Euclidean Lie-group geometry on SPD and full-rank correlation matrices.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the bottom fix the common double-precision choice.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// The Jacobi sweeps index several rows and columns at once.
#![allow(clippy::needless_range_loop)]

pub mod corr;
pub mod error;
pub mod group;
pub mod isometries;
pub mod quotient;
pub mod sample;
pub mod scalar;
pub mod scalers;
pub mod spd;
pub mod symlin;
pub mod verify;

pub use corr::{g_ls, g_ol, pi1, LogScalingChart, OffLogChart};
pub use error::{Error, Result};
pub use group::{
    geometric_cov, is_inverse_consistent, le_mean, le_variance, GroupElem, LeChart,
};
pub use scalar::Real;
pub use scalers::{solve_d, solve_dstar, FixedPointConfig, NewtonConfig, SolverConfig};
pub use spd::{g_dl_ambient, g_le, g_ol_ambient, SpdChart};
pub use symlin::{Subspace, SymMat};

pub type SymMat64 = SymMat<f64>;
pub type SymMat32 = SymMat<f32>;
pub type OffLogChart64 = OffLogChart<f64>;
pub type LogScalingChart64 = LogScalingChart<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
