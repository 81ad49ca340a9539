//! Iterative solvers for split feasibility and split equality fixed-point
//! problems in ℝⁿ.
//!
//! The central problem: find `x ∈ C ∩ Fix(U)` and `y ∈ Q ∩ Fix(T)` with
//! `Ax = By`. [`algorithms`] holds the iteration schemes and the solve
//! driver, [`diagnostics`] the residual and property checkers, and
//! [`library`] a worked scalar example plus a synthetic instance generator.

// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod diagnostics;
pub mod error;
pub mod hilbert;
pub mod library;

pub use error::{Error, Result};
