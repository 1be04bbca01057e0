//! Error measurement and convergence studies.

use alloc::format;
use alloc::vec::Vec;

use crate::collocation::{prolongate, solve_problem, InitialGuess};
use crate::nlsolve::SolverOptions;
use crate::problem::ProblemDef;
use crate::quadrature::gauss_legendre;
use crate::wavelet::{synthesize, BasisConfig, CoefficientVector};
use crate::{Error, Result};

/// Number of uniform sample points used for the max-norm estimate.
pub const MAX_ERROR_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub l2_error: f64,
    pub max_abs_error: f64,
    /// `(x, |y(x) - ŷ(x)|)` at the uniform sample points.
    pub sample_errors: Vec<(f64, f64)>,
}

/// L² error `sqrt(∫_0^l (y - ŷ)^2 dx)` by `(2M + 8)`-point Gauss–Legendre on
/// each subinterval, plus the max error over a uniform 1000-point sample.
pub fn l2_error<F: Fn(f64) -> f64>(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    exact: F,
) -> Result<ErrorReport> {
    l2_error_with_order(config, coeffs, exact, 2 * config.m() + 8)
}

/// [`l2_error`] with an explicit per-subinterval quadrature order.
pub fn l2_error_with_order<F: Fn(f64) -> f64>(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    exact: F,
    order: usize,
) -> Result<ErrorReport> {
    if coeffs.len() != config.dimension() {
        return Err(Error::DimensionMismatch {
            expected: config.dimension(),
            actual: coeffs.len(),
        });
    }
    let rule = gauss_legendre(order)?;
    let a = coeffs.as_slice();
    let mut sq = 0.0;
    for n in 1..=config.intervals() {
        for (x, w) in rule.mapped(config.breakpoint(n), config.breakpoint(n + 1)) {
            let e = exact(x) - config.block_row(n, x, 0).dot(config, a);
            sq += w * e * e;
        }
    }
    let sample_errors = (0..MAX_ERROR_SAMPLES)
        .map(|i| {
            let x = config.l() * i as f64 / (MAX_ERROR_SAMPLES - 1) as f64;
            synthesize(config, coeffs, x, 0).map(|y| (x, (exact(x) - y).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_abs_error = sample_errors.iter().fold(0.0f64, |m, &(_, e)| m.max(e));
    Ok(ErrorReport {
        l2_error: libm::sqrt(sq),
        max_abs_error,
        sample_errors,
    })
}

/// `|y(x) - ŷ(x)|` at each requested point.
pub fn pointwise_errors<F: Fn(f64) -> f64>(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    exact: F,
    points: &[f64],
) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|&x| synthesize(config, coeffs, x, 0).map(|y| (exact(x) - y).abs()))
        .collect()
}

/// One `(k, M)` cell of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub k: u32,
    pub m: usize,
    pub alpha: f64,
    /// `None` when the solve failed or did not converge.
    pub l2_error: Option<f64>,
    /// `error(k-1) / error(k)`; `None` on the first row or next to a failure.
    pub ratio: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.l2_error).collect()
    }
}

/// Solves `prob` at fixed `M` for every `k` in `k_range` and tabulates L²
/// errors against the exact solution. Failed solves stay in the table as
/// rows without an error value.
///
/// Each level starts Newton from the previous converged level's solution, so
/// nonlinear problems stay on the same solution branch as `k` grows.
pub fn convergence_study<I>(
    prob: &ProblemDef,
    m: usize,
    k_range: I,
    opts: &SolverOptions,
) -> Result<ConvergenceTable>
where
    I: IntoIterator<Item = u32>,
{
    let exact = prob.exact().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "{} has no exact solution for alpha = {}",
            prob.name(),
            prob.alpha().value()
        ))
    })?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut previous: Option<(BasisConfig, CoefficientVector)> = None;
    for k in k_range {
        let config = BasisConfig::new(k, m, prob.l())?;
        let guess = match &previous {
            Some((c, a)) if c.k() <= k => InitialGuess::Given(prolongate(c, a, &config)?),
            _ => InitialGuess::Zero,
        };
        let (l2, converged, iterations) = match solve_problem(prob, &config, opts, guess) {
            Ok(sol) if sol.report.converged => {
                let err = l2_error(&config, &sol.coefficients, |x| exact(x))?;
                let iterations = sol.report.iterations;
                previous = Some((config, sol.coefficients));
                (Some(err.l2_error), true, iterations)
            }
            Ok(sol) => (None, false, sol.report.iterations),
            Err(Error::SingularJacobian { iteration }) => (None, false, iteration),
            Err(Error::NonFiniteResidual { iteration, .. }) => (None, false, iteration),
            Err(e) => return Err(e),
        };
        let ratio = match (rows.last().and_then(|r| r.l2_error), l2) {
            (Some(prev), Some(cur)) if cur > 0.0 => Some(prev / cur),
            _ => None,
        };
        rows.push(ConvergenceRow {
            k,
            m,
            alpha: prob.alpha().value(),
            l2_error: l2,
            ratio,
            converged,
            iterations,
        });
    }
    Ok(ConvergenceTable { rows })
}

/// One sample of a solution curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub exact: Option<f64>,
}

/// `samples` uniform points of the expansion over `[0, l]` (endpoints
/// included), with the exact solution alongside when available.
pub fn sample_curve(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    samples: usize,
    exact: Option<&dyn Fn(f64) -> f64>,
) -> Result<Vec<CurvePoint>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "a curve needs at least two samples, got {samples}"
        )));
    }
    (0..samples)
        .map(|i| {
            let x = config.l() * i as f64 / (samples - 1) as f64;
            Ok(CurvePoint {
                x,
                y: synthesize(config, coeffs, x, 0)?,
                exact: exact.map(|f| f(x)),
            })
        })
        .collect()
}
