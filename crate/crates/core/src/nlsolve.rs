//! Damped Newton iteration for square nonlinear systems `F(x) = 0`.
//!
//! The Jacobian is rebuilt every iteration by forward differences, the Newton
//! step comes from a dense LU factorisation with partial pivoting, and the
//! step is halved until the residual 2-norm decreases.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Lu;
use crate::{Error, Result};

/// A square system of residual equations.
pub trait NonlinearSystem {
    fn dimension(&self) -> usize;

    /// Writes `F(x)` into `out`; both slices have length `dimension()`.
    fn evaluate(&self, x: &[f64], out: &mut [f64]);

    /// Human-readable name of a residual row, used in error messages.
    fn row_label(&self, row: usize) -> String {
        format!("row {row}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Infinity-norm residual tolerance.
    pub residual_tolerance: f64,
    /// Converged once `‖Δx‖∞ ≤ step_tolerance · (1 + ‖x‖∞)`.
    pub step_tolerance: f64,
    /// Relative forward-difference step; the perturbation of component `j`
    /// is `fd_step · (1 + |x_j|)`.
    pub fd_step: f64,
    /// Smallest damping factor tried by the line search.
    pub min_damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            residual_tolerance: 1e-12,
            step_tolerance: 1e-14,
            fd_step: libm::sqrt(f64::EPSILON),
            min_damping: libm::ldexp(1.0, -20),
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(self.residual_tolerance)
            && ok(self.step_tolerance)
            && ok(self.fd_step)
            && ok(self.min_damping))
        {
            return Err(Error::InvalidArgument(format!(
                "solver tolerances must be positive and finite: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Outcome of a Newton solve. Non-convergence is reported here, not as an
/// error; `solution` is then the best iterate found.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// `‖F(solution)‖∞`.
    pub final_residual_norm: f64,
    pub converged: bool,
    /// `‖F‖∞` at the initial point and after every accepted step.
    pub history: Vec<f64>,
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn first_non_finite(v: &[f64]) -> Option<usize> {
    v.iter().position(|x| !x.is_finite())
}

/// Forward-difference Jacobian at `x`, row-major, given `f0 = F(x)`.
pub fn forward_jacobian<S: NonlinearSystem + ?Sized>(
    system: &S,
    x: &[f64],
    f0: &[f64],
    fd_step: f64,
) -> Vec<f64> {
    let n = system.dimension();
    let mut jac = vec![0.0; n * n];
    let mut xp = x.to_vec();
    let mut fp = vec![0.0; n];
    for j in 0..n {
        let h = fd_step * (1.0 + x[j].abs());
        xp[j] = x[j] + h;
        let h = xp[j] - x[j];
        system.evaluate(&xp, &mut fp);
        for i in 0..n {
            jac[i * n + j] = (fp[i] - f0[i]) / h;
        }
        xp[j] = x[j];
    }
    jac
}

/// Solves `F(x) = 0` from `initial`.
pub fn solve<S: NonlinearSystem + ?Sized>(
    system: &S,
    initial: &[f64],
    opts: &SolverOptions,
) -> Result<SolveReport> {
    opts.validate()?;
    let n = system.dimension();
    if initial.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: initial.len(),
        });
    }

    let mut x = initial.to_vec();
    let mut f = vec![0.0; n];
    system.evaluate(&x, &mut f);
    if let Some(row) = first_non_finite(&f) {
        return Err(Error::NonFiniteResidual {
            row: system.row_label(row),
            iteration: 0,
        });
    }
    let mut res_inf = norm_inf(&f);
    let mut res2 = norm2(&f);
    let mut history = vec![res_inf];
    let mut iterations = 0;
    let mut converged = res_inf <= opts.residual_tolerance;

    let mut trial = vec![0.0; n];
    let mut f_trial = vec![0.0; n];
    while !converged && iterations < opts.max_iterations {
        let iteration = iterations + 1;
        let jac = forward_jacobian(system, &x, &f, opts.fd_step);
        if let Some(pos) = first_non_finite(&jac) {
            return Err(Error::NonFiniteResidual {
                row: system.row_label(pos / n),
                iteration,
            });
        }
        let lu = Lu::factor(n, jac).ok_or(Error::SingularJacobian { iteration })?;
        let neg_f: Vec<f64> = f.iter().map(|v| -v).collect();
        let step = lu.solve(&neg_f);
        let step_inf = norm_inf(&step);
        let x_inf = norm_inf(&x);

        let mut damping = 1.0;
        let accepted = loop {
            for ((t, xi), si) in trial.iter_mut().zip(&x).zip(&step) {
                *t = xi + damping * si;
            }
            system.evaluate(&trial, &mut f_trial);
            if first_non_finite(&f_trial).is_none() {
                let r2 = norm2(&f_trial);
                if r2 < res2 * (1.0 - 1e-4 * damping)
                    || norm_inf(&f_trial) <= opts.residual_tolerance
                {
                    break true;
                }
            }
            damping *= 0.5;
            if damping < opts.min_damping {
                break false;
            }
        };

        if !accepted {
            // No decrease along the Newton direction: either the residual sits
            // at its rounding floor (tiny step) or the iteration is stuck.
            converged = step_inf <= opts.step_tolerance * (1.0 + x_inf);
            break;
        }
        iterations = iteration;
        core::mem::swap(&mut x, &mut trial);
        core::mem::swap(&mut f, &mut f_trial);
        res_inf = norm_inf(&f);
        res2 = norm2(&f);
        history.push(res_inf);
        converged = res_inf <= opts.residual_tolerance
            || damping * step_inf <= opts.step_tolerance * (1.0 + norm_inf(&x));
    }

    Ok(SolveReport {
        solution: x,
        iterations,
        final_residual_norm: res_inf,
        converged,
        history,
    })
}
