//! Assembly of the square collocation system.
//!
//! Rows are stacked in a fixed order:
//!
//! 1. collocation residuals at `x_{i,j}`, `i = 1..2^(k-1)` (outer), `j = 2..M-1` (inner);
//! 2. value jumps of the expansion at the interior breakpoints;
//! 3. slope jumps at the interior breakpoints;
//! 4. the two side conditions.
//!
//! Everything that does not depend on the coefficients (Caputo rows, basis
//! rows at the collocation and delayed points, quadrature nodes of the integral
//! term, the history part of that integral) is precomputed once per system.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::nlsolve::{self, NonlinearSystem, SolveReport, SolverOptions};
use crate::problem::{Branch, Conditions, ProblemDef, RhsArgs};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::wavelet::{project, BasisConfig, BasisRow, CaputoOperator, CoefficientVector};
use crate::{Error, Result};

/// Shifted Chebyshev collocation points `x_{i,j} = (l / 2^k)(x_j + 2i - 1)`
/// with `x_j = cos((2j + 1)π / (2M))`, `j = 2..M-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    /// `points[i - 1][j - 2]`.
    points: Vec<Vec<f64>>,
}

impl CollocationGrid {
    pub fn point(&self, i: usize, j: usize) -> f64 {
        self.points[i - 1][j - 2]
    }

    /// `(i, j, x_{i,j})` in row order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.points
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &x)| (i + 1, j + 2, x)))
    }

    pub fn len(&self) -> usize {
        self.points.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_grid(config: &BasisConfig) -> CollocationGrid {
    let m = config.m();
    let scale = config.l() / libm::pow(2.0, config.k() as f64);
    let cheb: Vec<f64> = (2..m)
        .map(|j| libm::cos((2 * j + 1) as f64 * core::f64::consts::PI / (2 * m) as f64))
        .collect();
    let points = (1..=config.intervals())
        .map(|i| {
            cheb.iter()
                .map(|xj| scale * (xj + (2 * i - 1) as f64))
                .collect()
        })
        .collect();
    CollocationGrid { points }
}

/// Meaning of one row of the residual system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowTag {
    Collocation {
        i: usize,
        j: usize,
    },
    /// Jump of the expansion at the left end of subinterval `i`.
    ContinuityValue {
        i: usize,
    },
    /// Jump of the first derivative at the left end of subinterval `i`.
    ContinuitySlope {
        i: usize,
    },
    /// `y(0) = y0(0)`.
    ConditionA,
    /// `y'(0+) = y0'` or `y(l-) = y1`.
    ConditionB,
}

impl core::fmt::Display for RowTag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RowTag::Collocation { i, j } => write!(f, "collocation row (i = {i}, j = {j})"),
            RowTag::ContinuityValue { i } => write!(f, "value continuity row at breakpoint {i}"),
            RowTag::ContinuitySlope { i } => write!(f, "slope continuity row at breakpoint {i}"),
            RowTag::ConditionA => f.write_str("condition row y(0)"),
            RowTag::ConditionB => f.write_str("second condition row"),
        }
    }
}

/// Gauss–Legendre order used for the integral term, per smooth piece.
pub fn integral_rule_order(config: &BasisConfig) -> usize {
    (config.m() + 4).max(10)
}

#[derive(Debug, Clone)]
enum DelayedTerms {
    Ansatz { y: BasisRow, dy: BasisRow },
    History { y: f64, dy: f64 },
}

#[derive(Debug, Clone)]
struct IntegralNode {
    s: f64,
    weight: f64,
    basis: BasisRow,
}

/// Precomputed data of one collocation row.
#[derive(Debug, Clone)]
struct RowPlan {
    x: f64,
    caputo: Vec<f64>,
    y: BasisRow,
    dy: BasisRow,
    delayed: DelayedTerms,
    /// `∫_{px-τ}^0 g(x, s, y0(s)) ds` (zero on the positive branch).
    history_integral: f64,
    nodes: Vec<IntegralNode>,
}

/// Gauss nodes of `rule` on `[a, b]`, split at the breakpoints of `config`.
fn split_nodes(config: &BasisConfig, rule: &QuadratureRule, a: f64, b: f64) -> Vec<IntegralNode> {
    let mut nodes = Vec::new();
    if !(a < b) {
        return nodes;
    }
    for n in 1..=config.intervals() {
        let lo = config.breakpoint(n).max(a);
        let hi = config.breakpoint(n + 1).min(b);
        if lo < hi {
            for (s, weight) in rule.mapped(lo, hi) {
                nodes.push(IntegralNode {
                    s,
                    weight,
                    basis: config.block_row(n, s, 0),
                });
            }
        }
    }
    nodes
}

impl RowPlan {
    fn new(
        prob: &ProblemDef,
        config: &BasisConfig,
        caputo: &CaputoOperator,
        rule: &QuadratureRule,
        x: f64,
    ) -> Result<Self> {
        let delayed_arg = prob.delayed_arg(x);
        let d = delayed_arg.value;
        let (delayed, history_integral, lower) = match delayed_arg.branch {
            Branch::Positive => (
                DelayedTerms::Ansatz {
                    y: config.basis_row(d, 0)?,
                    dy: config.basis_row(d, 1)?,
                },
                0.0,
                d,
            ),
            Branch::NonPositive => {
                let fixed = if prob.has_kernel() && d < 0.0 {
                    let mut acc = 0.0;
                    for (s, w) in rule.mapped(d, 0.0) {
                        acc += w * prob.kernel(x, s, prob.eval_history(s, 0)?);
                    }
                    acc
                } else {
                    0.0
                };
                (
                    DelayedTerms::History {
                        y: prob.eval_history(d, 0)?,
                        dy: prob.eval_history(d, 1)?,
                    },
                    fixed,
                    0.0,
                )
            }
        };
        let nodes = if prob.has_kernel() {
            split_nodes(config, rule, lower, x)
        } else {
            Vec::new()
        };
        Ok(Self {
            x,
            caputo: caputo.caputo_row(x)?,
            y: config.basis_row(x, 0)?,
            dy: config.basis_row(x, 1)?,
            delayed,
            history_integral,
            nodes,
        })
    }

    fn evaluate(&self, prob: &ProblemDef, config: &BasisConfig, a: &[f64]) -> f64 {
        let frac: f64 = self.caputo.iter().zip(a).map(|(d, c)| d * c).sum();
        let (y_delay, dy_delay) = match &self.delayed {
            DelayedTerms::Ansatz { y, dy } => (y.dot(config, a), dy.dot(config, a)),
            DelayedTerms::History { y, dy } => (*y, *dy),
        };
        let integral = self.history_integral
            + self
                .nodes
                .iter()
                .map(|node| node.weight * prob.kernel(self.x, node.s, node.basis.dot(config, a)))
                .sum::<f64>();
        let args = RhsArgs {
            x: self.x,
            y: self.y.dot(config, a),
            dy: self.dy.dot(config, a),
            y_delay,
            dy_delay,
            integral,
        };
        frac - prob.rhs(&args)
    }
}

/// The collocation residual `R1(x)` or `R2(x)` at a single point `x`.
pub fn residual_row(
    prob: &ProblemDef,
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    x: f64,
) -> Result<f64> {
    check_dimension(config, coeffs)?;
    let caputo = CaputoOperator::new(*config, prob.alpha())?;
    let rule = gauss_legendre(integral_rule_order(config))?;
    let plan = RowPlan::new(prob, config, &caputo, &rule, x)?;
    Ok(plan.evaluate(prob, config, coeffs.as_slice()))
}

fn check_dimension(config: &BasisConfig, coeffs: &CoefficientVector) -> Result<()> {
    if coeffs.len() != config.dimension() {
        return Err(Error::DimensionMismatch {
            expected: config.dimension(),
            actual: coeffs.len(),
        });
    }
    Ok(())
}

/// Value jumps then slope jumps (left limit minus right limit) at every
/// interior breakpoint; empty for `k = 1`.
pub fn continuity_rows(config: &BasisConfig, coeffs: &CoefficientVector) -> Vec<f64> {
    let a = coeffs.as_slice();
    let jump = |i: usize, deriv: usize| {
        let xb = config.breakpoint(i);
        config.block_row(i - 1, xb, deriv).dot(config, a)
            - config.block_row(i, xb, deriv).dot(config, a)
    };
    let values = (2..=config.intervals()).map(|i| jump(i, 0));
    let slopes = (2..=config.intervals()).map(|i| jump(i, 1));
    values.chain(slopes).collect()
}

/// Residuals of the two side conditions.
pub fn condition_rows(
    prob: &ProblemDef,
    config: &BasisConfig,
    coeffs: &CoefficientVector,
) -> (f64, f64) {
    let a = coeffs.as_slice();
    let at_zero = config.block_row(1, 0.0, 0).dot(config, a);
    match prob.conditions() {
        Conditions::Initial { y0_at_0, yprime0 } => {
            let slope = config.block_row(1, 0.0, 1).dot(config, a);
            (at_zero - y0_at_0, slope - yprime0)
        }
        Conditions::Boundary { y0_at_0, y1 } => {
            let at_l = config
                .block_row(config.intervals(), config.l(), 0)
                .dot(config, a);
            (at_zero - y0_at_0, at_l - y1)
        }
    }
}

/// The assembled system for one problem and basis.
#[derive(Debug, Clone)]
pub struct ResidualSystem {
    prob: ProblemDef,
    config: BasisConfig,
    tags: Vec<RowTag>,
    rows: Vec<RowPlan>,
}

pub fn assemble(prob: &ProblemDef, config: &BasisConfig) -> Result<ResidualSystem> {
    if (prob.l() - config.l()).abs() > 1e-14 * prob.l() {
        return Err(Error::InvalidArgument(format!(
            "basis domain length {} differs from problem domain length {}",
            config.l(),
            prob.l()
        )));
    }
    let caputo = CaputoOperator::new(*config, prob.alpha())?;
    let rule = gauss_legendre(integral_rule_order(config))?;
    let grid = build_grid(config);

    let mut tags = Vec::with_capacity(config.dimension());
    let mut rows = Vec::with_capacity(grid.len());
    for (i, j, x) in grid.iter() {
        tags.push(RowTag::Collocation { i, j });
        rows.push(RowPlan::new(prob, config, &caputo, &rule, x)?);
    }
    tags.extend((2..=config.intervals()).map(|i| RowTag::ContinuityValue { i }));
    tags.extend((2..=config.intervals()).map(|i| RowTag::ContinuitySlope { i }));
    tags.push(RowTag::ConditionA);
    tags.push(RowTag::ConditionB);
    assert_eq!(
        tags.len(),
        config.dimension(),
        "row count must match the trial space dimension"
    );

    Ok(ResidualSystem {
        prob: prob.clone(),
        config: *config,
        tags,
        rows,
    })
}

impl ResidualSystem {
    pub fn config(&self) -> &BasisConfig {
        &self.config
    }

    pub fn problem(&self) -> &ProblemDef {
        &self.prob
    }

    pub fn tags(&self) -> &[RowTag] {
        &self.tags
    }

    /// The full residual vector at `coeffs`.
    pub fn residual(&self, coeffs: &CoefficientVector) -> Result<Vec<f64>> {
        check_dimension(&self.config, coeffs)?;
        let mut out = vec![0.0; self.config.dimension()];
        self.evaluate(coeffs.as_slice(), &mut out);
        Ok(out)
    }
}

impl NonlinearSystem for ResidualSystem {
    fn dimension(&self) -> usize {
        self.config.dimension()
    }

    fn evaluate(&self, a: &[f64], out: &mut [f64]) {
        let n_colloc = self.rows.len();
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.evaluate(&self.prob, &self.config, a);
        }
        let coeffs = CoefficientVector::from_values(&self.config, a.to_vec())
            .expect("dimension checked by caller");
        let cont = continuity_rows(&self.config, &coeffs);
        out[n_colloc..n_colloc + cont.len()].copy_from_slice(&cont);
        let (c1, c2) = condition_rows(&self.prob, &self.config, &coeffs);
        let dim = out.len();
        out[dim - 2] = c1;
        out[dim - 1] = c2;
    }

    fn row_label(&self, row: usize) -> String {
        format!("{}", self.tags[row])
    }
}

/// Starting point of the Newton iteration.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitialGuess {
    #[default]
    Zero,
    /// Projection of the constant function `y0(0)`.
    HistoryConstant,
    /// Caller-supplied coefficients, e.g. a coarser solution run through [`prolongate`].
    Given(CoefficientVector),
}

/// Re-expands an expansion in `from` on the basis `to`. Exact when `to`
/// refines `from` (same `l`, `k_to ≥ k_from`, `M_to ≥ M_from`).
pub fn prolongate(
    from: &BasisConfig,
    coeffs: &CoefficientVector,
    to: &BasisConfig,
) -> Result<CoefficientVector> {
    check_dimension(from, coeffs)?;
    if (from.l() - to.l()).abs() > 0.0 {
        return Err(Error::InvalidArgument(format!(
            "cannot prolongate between domains [0, {}] and [0, {}]",
            from.l(),
            to.l()
        )));
    }
    Ok(project(to, |x| {
        let n = from.locate(x).unwrap_or(from.intervals());
        from.block_row(n, x, 0).dot(from, coeffs.as_slice())
    }))
}

/// Converged (or best) coefficients and the solver report.
#[derive(Debug, Clone)]
pub struct Solution {
    pub config: BasisConfig,
    pub coefficients: CoefficientVector,
    pub report: SolveReport,
}

/// Assembles and solves `prob` in the basis `config`.
pub fn solve_problem(
    prob: &ProblemDef,
    config: &BasisConfig,
    opts: &SolverOptions,
    initial: InitialGuess,
) -> Result<Solution> {
    let system = assemble(prob, config)?;
    let start = match initial {
        InitialGuess::Zero => CoefficientVector::zeros(config),
        InitialGuess::HistoryConstant => {
            let c = prob.conditions().y0_at_0();
            project(config, |_| c)
        }
        InitialGuess::Given(a) => {
            check_dimension(config, &a)?;
            a
        }
    };
    let report = nlsolve::solve(&system, start.as_slice(), opts)?;
    let coefficients = CoefficientVector::from_values(config, report.solution.clone())?;
    Ok(Solution {
        config: *config,
        coefficients,
        report,
    })
}

/// Solves at level `(k, M)` on the problem's domain by continuation: level 1
/// starts from zero and every finer level starts from the prolongated
/// solution of the level below. A level that fails to converge is returned
/// as is. Without this, Newton from zero can land on spurious roots of
/// nonlinear problems.
pub fn solve_example(
    prob: &ProblemDef,
    k: u32,
    m: usize,
    opts: &SolverOptions,
) -> Result<Solution> {
    let target = BasisConfig::new(k, m, prob.l())?;
    let mut guess = InitialGuess::Zero;
    for level in 1..k {
        let config = BasisConfig::new(level, m, prob.l())?;
        let coarse = solve_problem(prob, &config, opts, core::mem::take(&mut guess))?;
        if !coarse.report.converged {
            break;
        }
        let next = BasisConfig::new(level + 1, m, prob.l())?;
        guess = InitialGuess::Given(prolongate(&config, &coarse.coefficients, &next)?);
    }
    if !matches!(&guess, InitialGuess::Given(a) if a.len() == target.dimension()) {
        guess = InitialGuess::Zero;
    }
    solve_problem(prob, &target, opts, guess)
}
