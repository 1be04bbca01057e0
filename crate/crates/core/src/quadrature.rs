//! Gauss–Jacobi quadrature on `[-1, 1]`.
//!
//! Nodes come from the eigenvalues of the symmetric Jacobi matrix built from
//! the monic three-term recurrence (Golub–Welsch), then each node is polished
//! by Newton's method on `J_N^(λ,ν)`. Weights use the closed form
//!
//! ```text
//! w_s = 2^(λ+ν+1) Γ(λ+N+1) Γ(ν+N+1) / (N! Γ(λ+ν+N+1) J_N'(x_s)^2 (1 - x_s^2))
//! ```
//!
//! evaluated at the polished nodes.

use alloc::vec::Vec;

use crate::linalg::tridiagonal_eigen;
use crate::orthopoly::{jacobi_deriv, jacobi_eval, JacobiParams};
use crate::{gamma, Error, Result};

/// An `N`-point Gaussian rule for the weight `(1 - x)^λ (1 + x)^ν`.
///
/// Nodes are strictly increasing and interior to `(-1, 1)`; weights are
/// positive. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    params: JacobiParams,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_s f(x_s)` on the reference interval.
    pub fn apply<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `(b - a)/2 · Σ w_s f(map(x_s))` with `map` the affine map `[-1, 1] → [a, b]`.
    ///
    /// A non-trivial Jacobi weight stays in the reference frame: the caller is
    /// responsible for the Jacobian factor of the weight itself.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::InvalidArgument(alloc::format!(
                "integration interval must satisfy a < b (got [{a}, {b}])"
            )));
        }
        Ok(self.integrate_unchecked(f, a, b))
    }

    /// As [`integrate`](Self::integrate) but without the interval check.
    pub(crate) fn integrate_unchecked<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
    ) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.apply(|t| f(mid + half * t))
    }

    /// Nodes and weights mapped onto `[a, b]` (weights scaled by `(b - a)/2`).
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, half * w))
    }
}

/// Recurrence coefficients of the monic Jacobi polynomials: diagonal `a_j`
/// for `j = 0..n` and off-diagonal `sqrt(b_j)` for `j = 1..n`.
fn jacobi_matrix(params: JacobiParams, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (params.lambda(), params.nu());
    let ab = a + b;
    let diag = (0..n)
        .map(|j| {
            if j == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let c = 2.0 * j as f64 + ab;
                (b * b - a * a) / (c * (c + 2.0))
            }
        })
        .collect();
    let off = (1..n)
        .map(|j| {
            let jf = j as f64;
            let beta = if j == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                let c = 2.0 * jf + ab;
                4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (c * c * (c + 1.0) * (c - 1.0))
            };
            libm::sqrt(beta)
        })
        .collect();
    (diag, off)
}

/// Builds the `n`-point Gauss–Jacobi rule, exact for polynomials of degree
/// `≤ 2n - 1` against the weight `(1 - x)^λ (1 + x)^ν`.
pub fn gauss_jacobi(params: JacobiParams, n: usize) -> Result<QuadratureRule> {
    let fail = |reason| Error::Quadrature {
        lambda: params.lambda(),
        nu: params.nu(),
        order: n,
        reason,
    };
    if n == 0 {
        return Err(fail("rule order must be at least 1"));
    }
    let (diag, off) = jacobi_matrix(params, n);
    let (mut nodes, _) =
        tridiagonal_eigen(&diag, &off).ok_or_else(|| fail("eigensolver did not converge"))?;
    nodes.sort_by(f64::total_cmp);

    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let step = jacobi_eval(params, n, *x) / jacobi_deriv(params, n, *x);
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
                break;
            }
        }
    }

    let (a, b) = (params.lambda(), params.nu());
    let nf = n as f64;
    let numer = libm::pow(2.0, a + b + 1.0) * gamma(a + nf + 1.0) * gamma(b + nf + 1.0)
        / (gamma(nf + 1.0) * gamma(a + b + nf + 1.0));
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let d = jacobi_deriv(params, n, x);
            numer / (d * d * (1.0 - x * x))
        })
        .collect();

    if nodes.iter().any(|x| !(x.abs() < 1.0)) {
        return Err(fail("node outside (-1, 1)"));
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(fail("nodes not strictly increasing"));
    }
    if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(fail("non-positive weight"));
    }
    Ok(QuadratureRule {
        params,
        nodes,
        weights,
    })
}

/// The `n`-point Gauss–Legendre rule.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    gauss_jacobi(JacobiParams::legendre(), n)
}

/// Golub–Welsch weights `μ0 · v_0^2`, used only to cross-check the closed form.
#[cfg(test)]
pub(crate) fn eigenvector_weights(params: JacobiParams, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (diag, off) = jacobi_matrix(params, n);
    let (vals, z) = tridiagonal_eigen(&diag, &off).unwrap();
    let mu0 = params.zeroth_moment();
    let mut pairs: Vec<(f64, f64)> = vals
        .into_iter()
        .zip(z.into_iter().map(|v| mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}
