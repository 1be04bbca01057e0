//! Legendre and Jacobi polynomials on `[-1, 1]`.
//!
//! Everything here is evaluated through three-term recurrences; derivatives
//! come from differentiating the recurrence, so they are exact up to rounding
//! rather than finite-difference approximations.

use alloc::format;

use crate::{gamma, Error, Result};

/// Exponents of the Jacobi weight `(1 - x)^lambda (1 + x)^nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    lambda: f64,
    nu: f64,
}

impl JacobiParams {
    /// Both exponents must exceed `-1` for the weight to be integrable.
    pub fn new(lambda: f64, nu: f64) -> Result<Self> {
        if !(lambda > -1.0 && nu > -1.0) || !lambda.is_finite() || !nu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Jacobi exponents must be finite and > -1 (lambda = {lambda}, nu = {nu})"
            )));
        }
        Ok(Self { lambda, nu })
    }

    /// The Legendre case `lambda = nu = 0`.
    pub const fn legendre() -> Self {
        Self {
            lambda: 0.0,
            nu: 0.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Evaluates the weight function at `x`.
    pub fn weight(&self, x: f64) -> f64 {
        libm::pow(1.0 - x, self.lambda) * libm::pow(1.0 + x, self.nu)
    }

    /// `∫_{-1}^{1} (1 - x)^lambda (1 + x)^nu dx = 2^(lambda+nu+1) B(lambda+1, nu+1)`.
    pub fn zeroth_moment(&self) -> f64 {
        let (a, b) = (self.lambda, self.nu);
        libm::pow(2.0, a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0)
    }
}

/// Values of `P_m`, `P_m'` and `P_m''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Evaluates `P_m(x)` together with its first two derivatives using Bonnet's
/// recurrence `m P_m = (2m - 1) x P_{m-1} - (m - 1) P_{m-2}` and its
/// derivatives.
pub fn legendre_with_derivs(m: usize, x: f64) -> LegendreValue {
    let (mut p0, mut d0, mut s0) = (1.0, 0.0, 0.0);
    if m == 0 {
        return LegendreValue {
            value: p0,
            d1: d0,
            d2: s0,
        };
    }
    let (mut p1, mut d1, mut s1) = (x, 1.0, 0.0);
    for j in 2..=m {
        let jf = j as f64;
        let a = (2.0 * jf - 1.0) / jf;
        let b = (jf - 1.0) / jf;
        let p2 = a * x * p1 - b * p0;
        let d2 = a * (p1 + x * d1) - b * d0;
        let s2 = a * (2.0 * d1 + x * s1) - b * s0;
        (p0, d0, s0) = (p1, d1, s1);
        (p1, d1, s1) = (p2, d2, s2);
    }
    LegendreValue {
        value: p1,
        d1,
        d2: s1,
    }
}

/// Fills `out[m]` with `P_m`, `P_m'`, `P_m''` at `x` for `m = 0..out.len()`.
pub fn legendre_sequence(x: f64, out: &mut [LegendreValue]) {
    let (mut p0, mut d0, mut s0) = (1.0, 0.0, 0.0);
    let (mut p1, mut d1, mut s1) = (x, 1.0, 0.0);
    for (j, slot) in out.iter_mut().enumerate() {
        match j {
            0 => {
                *slot = LegendreValue {
                    value: p0,
                    d1: d0,
                    d2: s0,
                };
            }
            1 => {
                *slot = LegendreValue {
                    value: p1,
                    d1,
                    d2: s1,
                };
            }
            _ => {
                let jf = j as f64;
                let a = (2.0 * jf - 1.0) / jf;
                let b = (jf - 1.0) / jf;
                let p2 = a * x * p1 - b * p0;
                let d2 = a * (p1 + x * d1) - b * d0;
                let s2 = a * (2.0 * d1 + x * s1) - b * s0;
                (p0, d0, s0) = (p1, d1, s1);
                (p1, d1, s1) = (p2, d2, s2);
                *slot = LegendreValue {
                    value: p1,
                    d1,
                    d2: s1,
                };
            }
        }
    }
}

/// Legendre polynomial `P_m(x)`, normalised so that `P_m(1) = 1`.
pub fn legendre_eval(m: usize, x: f64) -> f64 {
    legendre_with_derivs(m, x).value
}

/// First or second derivative of `P_m` at `x`.
pub fn legendre_deriv(m: usize, order: usize, x: f64) -> Result<f64> {
    let v = legendre_with_derivs(m, x);
    match order {
        1 => Ok(v.d1),
        2 => Ok(v.d2),
        _ => Err(Error::InvalidArgument(format!(
            "Legendre derivative order must be 1 or 2, got {order}"
        ))),
    }
}

/// Jacobi polynomial `J_n^(lambda, nu)(x)` in the classical normalisation
/// `J_n(1) = Γ(n + lambda + 1) / (n! Γ(lambda + 1))`.
pub fn jacobi_eval(params: JacobiParams, n: usize, x: f64) -> f64 {
    let (a, b) = (params.lambda, params.nu);
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for j in 2..=n {
        let jf = j as f64;
        let c = 2.0 * jf + a + b;
        let lead = 2.0 * jf * (jf + a + b) * (c - 2.0);
        let mid = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let back = 2.0 * (jf + a - 1.0) * (jf + b - 1.0) * c;
        let p2 = (mid * p1 - back * p0) / lead;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `d/dx J_n^(lambda, nu)(x) = (n + lambda + nu + 1)/2 · J_{n-1}^(lambda+1, nu+1)(x)`.
pub fn jacobi_deriv(params: JacobiParams, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let shifted = JacobiParams {
        lambda: params.lambda + 1.0,
        nu: params.nu + 1.0,
    };
    0.5 * (n as f64 + params.lambda + params.nu + 1.0) * jacobi_eval(shifted, n - 1, x)
}

/// Squared weighted norm
/// `h_n = 2^(λ+ν+1) Γ(λ+n+1) Γ(ν+n+1) / (n! (λ+ν+2n+1) Γ(λ+ν+n+1))`.
pub fn jacobi_norm(params: JacobiParams, n: usize) -> f64 {
    let (a, b) = (params.lambda, params.nu);
    let nf = n as f64;
    if n == 0 {
        // (λ+ν+1) Γ(λ+ν+1) = Γ(λ+ν+2); avoids the pole at λ+ν = -1.
        return params.zeroth_moment();
    }
    libm::pow(2.0, a + b + 1.0) * gamma(a + nf + 1.0) * gamma(b + nf + 1.0)
        / (gamma(nf + 1.0) * (a + b + 2.0 * nf + 1.0) * gamma(a + b + nf + 1.0))
}
