#![no_std]
// `!(a < b)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Legendre wavelet collocation for fractional delay-type integro-differential
//! equations of Caputo order `1 < alpha <= 2`.
//!
//! The unknown is expanded in the Legendre wavelet basis on `[0, l)`. The
//! Caputo derivative of every basis function is evaluated with a Gauss–Jacobi
//! rule whose weight absorbs the `(x - s)^(1 - alpha)` kernel, the equation is
//! collocated at shifted Chebyshev points, and the resulting square nonlinear
//! system is solved with a damped Newton method.
//!
//! Module map, bottom-up:
//!
//! - [`orthopoly`]: Legendre and Jacobi polynomials by three-term recurrence.
//! - [`quadrature`]: Gauss–Jacobi / Gauss–Legendre rules (Golub–Welsch + Newton polish).
//! - [`wavelet`]: the trial space, its derivatives, projection and the Caputo operator.
//! - [`problem`]: problem definitions and the registry of worked examples.
//! - [`collocation`]: assembly of the residual system.
//! - [`nlsolve`]: Newton solver with finite-difference Jacobian.
//! - [`analysis`]: L² errors, pointwise errors and convergence tables.

extern crate alloc;

pub mod analysis;
pub mod collocation;
mod error;
mod linalg;
pub mod nlsolve;
pub mod orthopoly;
pub mod problem;
pub mod quadrature;
pub mod wavelet;

pub use error::{Error, Result};

/// Gamma function.
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}
