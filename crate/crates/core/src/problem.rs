//! Fractional delay-type integro-differential problems
//!
//! ```text
//! ^cD^α y(x) = f(x, y(x), y'(x), y(px - τ), y'(px - τ), ∫_{px-τ}^x g(x, s, y(s)) ds),   0 ≤ x ≤ l
//! y(x) = y0(x) for x ≤ 0,  plus  y'(0) = y0'  or  y(l) = y1
//! ```
//!
//! The right-hand side, kernel and history are host closures; there is no
//! expression language.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::wavelet::FracOrder;
use crate::{gamma, Error, Result};

/// Real function of one variable, shareable across threads.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `g(x, s, y)`.
pub type KernelFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
/// `f(x, y, y', y_d, y'_d, I)`.
pub type RhsFn = Arc<dyn Fn(&RhsArgs) -> f64 + Send + Sync>;

/// Arguments of the right-hand side functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsArgs {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
    /// `y(px - τ)`
    pub y_delay: f64,
    /// `y'(px - τ)`
    pub dy_delay: f64,
    /// `∫_{px-τ}^x g(x, s, y(s)) ds`; zero when the problem has no kernel.
    pub integral: f64,
}

/// Delay component `τ`, constant or depending on `x`.
#[derive(Clone)]
pub enum Delay {
    Constant(f64),
    Variable(ScalarFn),
}

impl Delay {
    pub fn at(&self, x: f64) -> f64 {
        match self {
            Delay::Constant(t) => *t,
            Delay::Variable(f) => f(x),
        }
    }
}

impl fmt::Debug for Delay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delay::Constant(t) => write!(f, "Constant({t})"),
            Delay::Variable(_) => f.write_str("Variable(<fn>)"),
        }
    }
}

/// Side conditions: `y'(0) = yprime0` (initial value problem) or `y(l) = y1`
/// (boundary value problem). Both carry `y(0) = y0(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditions {
    Initial { y0_at_0: f64, yprime0: f64 },
    Boundary { y0_at_0: f64, y1: f64 },
}

impl Conditions {
    pub fn y0_at_0(&self) -> f64 {
        match *self {
            Conditions::Initial { y0_at_0, .. } | Conditions::Boundary { y0_at_0, .. } => y0_at_0,
        }
    }
}

/// Which history/ansatz branch the delayed argument selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `px - τ > 0`: delayed values come from the expansion.
    Positive,
    /// `px - τ ≤ 0`: delayed values come from the history function.
    NonPositive,
}

/// The delayed argument `px - τ(x)` with its branch tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayedArg {
    pub value: f64,
    pub branch: Branch,
}

/// One problem instance.
#[derive(Clone)]
pub struct ProblemDef {
    name: String,
    alpha: FracOrder,
    l: f64,
    p: f64,
    tau: Delay,
    rhs: RhsFn,
    kernel: Option<KernelFn>,
    history: ScalarFn,
    history_deriv: ScalarFn,
    conditions: Conditions,
    exact: Option<ScalarFn>,
}

impl fmt::Debug for ProblemDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDef")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("l", &self.l)
            .field("p", &self.p)
            .field("tau", &self.tau)
            .field("has_kernel", &self.kernel.is_some())
            .field("conditions", &self.conditions)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

/// Builder for [`ProblemDef`]; validation happens in [`build`](Self::build).
pub struct ProblemBuilder {
    name: String,
    alpha: f64,
    l: f64,
    p: f64,
    tau: Delay,
    rhs: RhsFn,
    kernel: Option<KernelFn>,
    history: ScalarFn,
    history_deriv: ScalarFn,
    conditions: Conditions,
    exact: Option<ScalarFn>,
}

impl ProblemBuilder {
    pub fn delay(mut self, tau: Delay) -> Self {
        self.tau = tau;
        self
    }

    pub fn proportional(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn kernel(mut self, g: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.kernel = Some(Arc::new(g));
        self
    }

    pub fn history(
        mut self,
        y0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dy0: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.history = Arc::new(y0);
        self.history_deriv = Arc::new(dy0);
        self
    }

    /// `y'(0) = yprime0`; `y(0)` is taken from the history function.
    pub fn initial_slope(mut self, yprime0: f64) -> Self {
        self.conditions = Conditions::Initial {
            y0_at_0: f64::NAN,
            yprime0,
        };
        self
    }

    /// `y(l) = y1`; `y(0)` is taken from the history function.
    pub fn boundary_value(mut self, y1: f64) -> Self {
        self.conditions = Conditions::Boundary {
            y0_at_0: f64::NAN,
            y1,
        };
        self
    }

    pub fn exact(mut self, y: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(y));
        self
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn build(self) -> Result<ProblemDef> {
        let alpha = FracOrder::new(self.alpha)?;
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "domain length must be positive, got {}",
                self.l
            )));
        }
        if !self.p.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "delay factor p = {} is not finite",
                self.p
            )));
        }
        for i in 0..=SCAN_POINTS {
            let x = self.l * i as f64 / SCAN_POINTS as f64;
            let t = self.tau.at(x);
            if !(t >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "delay τ({x}) = {t} is negative"
                )));
            }
            if matches!(self.tau, Delay::Constant(_)) {
                break;
            }
        }
        let y00 = (self.history)(0.0);
        let conditions = match self.conditions {
            Conditions::Initial { yprime0, .. } => Conditions::Initial {
                y0_at_0: y00,
                yprime0,
            },
            Conditions::Boundary { y1, .. } => Conditions::Boundary { y0_at_0: y00, y1 },
        };
        Ok(ProblemDef {
            name: self.name,
            alpha,
            l: self.l,
            p: self.p,
            tau: self.tau,
            rhs: self.rhs,
            kernel: self.kernel,
            history: self.history,
            history_deriv: self.history_deriv,
            conditions,
            exact: self.exact,
        })
    }
}

const SCAN_POINTS: usize = 1000;

impl ProblemDef {
    /// Starts a problem on `[0, l]` with Caputo order `alpha` and right-hand
    /// side `rhs`. Defaults: `p = 1`, `τ = 0`, zero history, no kernel,
    /// `y'(0) = 0`.
    pub fn builder(
        alpha: f64,
        l: f64,
        rhs: impl Fn(&RhsArgs) -> f64 + Send + Sync + 'static,
    ) -> ProblemBuilder {
        ProblemBuilder {
            name: String::new(),
            alpha,
            l,
            p: 1.0,
            tau: Delay::Constant(0.0),
            rhs: Arc::new(rhs),
            kernel: None,
            history: Arc::new(|_| 0.0),
            history_deriv: Arc::new(|_| 0.0),
            conditions: Conditions::Initial {
                y0_at_0: 0.0,
                yprime0: 0.0,
            },
            exact: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tau(&self) -> &Delay {
        &self.tau
    }

    pub fn conditions(&self) -> Conditions {
        self.conditions
    }

    pub fn has_kernel(&self) -> bool {
        self.kernel.is_some()
    }

    pub fn kernel(&self, x: f64, s: f64, y: f64) -> f64 {
        self.kernel.as_ref().map_or(0.0, |g| g(x, s, y))
    }

    pub fn rhs(&self, args: &RhsArgs) -> f64 {
        (self.rhs)(args)
    }

    /// Exact solution, when known for these parameters.
    pub fn exact(&self) -> Option<&ScalarFn> {
        self.exact.as_ref()
    }

    /// `px - τ(x)` and its branch; `value ≤ 0` is `NonPositive`.
    pub fn delayed_arg(&self, x: f64) -> DelayedArg {
        let value = self.p * x - self.tau.at(x);
        let branch = if value > 0.0 {
            Branch::Positive
        } else {
            Branch::NonPositive
        };
        DelayedArg { value, branch }
    }

    /// `y0(x)` (`deriv = 0`) or `y0'(x)` (`deriv = 1`) for `x ≤ 0`.
    pub fn eval_history(&self, x: f64, deriv: usize) -> Result<f64> {
        if x > 0.0 {
            return Err(Error::HistoryDomain(x));
        }
        match deriv {
            0 => Ok((self.history)(x)),
            1 => Ok((self.history_deriv)(x)),
            _ => Err(Error::InvalidArgument(format!(
                "history derivative order must be 0 or 1, got {deriv}"
            ))),
        }
    }

    /// Lower end `ρ` of the history interval actually used by the equation.
    pub fn rho(&self) -> f64 {
        match self.tau {
            Delay::Constant(t) => (-t).min(self.p * self.l - t),
            Delay::Variable(_) => (0..=SCAN_POINTS)
                .map(|i| {
                    self.delayed_arg(self.l * i as f64 / SCAN_POINTS as f64)
                        .value
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Registered examples; ids are stable and used by the CLI.
pub const EXAMPLE_IDS: [u32; 4] = [1, 2, 3, 4];

/// Default order for each registered example (for example 4 this is the order
/// of the original, undifferentiated equation).
pub fn default_alpha(id: u32) -> Option<f64> {
    match id {
        1 => Some(1.5),
        2 => Some(1.9),
        3 => Some(2.0),
        4 => Some(1.0),
        _ => None,
    }
}

/// Example `id` with its default order.
pub fn example_registry(id: u32) -> Result<ProblemDef> {
    example_with_alpha(id, None)
}

/// Example `id` with an optional order override. Exact-solution metadata is
/// attached only when the order equals the one the exact solution belongs to.
///
/// Example 4 is stored in differentiated form,
/// `^cD^(α+1) y = y'(x - 1) + y(x) - y(x - 1)` with `y'(0) = 1`; `alpha` here
/// refers to the original equation, `0 < α ≤ 1`.
pub fn example_with_alpha(id: u32, alpha: Option<f64>) -> Result<ProblemDef> {
    let alpha = match (alpha, default_alpha(id)) {
        (_, None) => {
            return Err(Error::InvalidArgument(format!(
                "unknown example id {id}; registered ids are 1-4"
            )))
        }
        (Some(a), _) => a,
        (None, Some(a)) => a,
    };
    let same = |reference: f64| (alpha - reference).abs() < 1e-15;
    let sqrt_pi = libm::sqrt(core::f64::consts::PI);

    match id {
        1 => {
            let b = ProblemDef::builder(alpha, 2.0, move |a: &RhsArgs| {
                let x = a.x;
                a.y_delay * a.dy - a.integral - 2.0 * x * x * x + 5.0 * x * x - 3.0 * x
                    + 4.0 / sqrt_pi * libm::sqrt(x)
                    + 1.0 / 3.0
            })
            .name("example 1: nonlinear delay integro-differential BVP")
            .delay(Delay::Constant(1.0))
            .kernel(|_, _, y| y)
            .history(|x| x * x, |x| 2.0 * x)
            .boundary_value(4.0);
            if same(1.5) { b.exact(|x| x * x) } else { b }.build()
        }
        2 => {
            let forcing = 105.0 * sqrt_pi / (16.0 * gamma(13.0 / 5.0));
            let b = ProblemDef::builder(alpha, 1.0, move |a: &RhsArgs| {
                a.dy_delay - 7.0 / (8.0 * core::f64::consts::SQRT_2) * libm::pow(a.x, 2.5)
                    + forcing * libm::pow(a.x, 1.6)
            })
            .name("example 2: linear fractional pantograph IVP")
            .proportional(0.5)
            .history(|_| 0.0, |_| 0.0)
            .initial_slope(0.0);
            if same(1.9) {
                b.exact(|x| libm::pow(x, 3.5))
            } else {
                b
            }
            .build()
        }
        3 => {
            // Coefficient 4/3 on y'(x/2) y(x): with it, y = 1 + x - x^3 solves the α = 2 equation exactly.
            let b = ProblemDef::builder(alpha, 1.0, |a: &RhsArgs| {
                let x = a.x;
                4.0 / 3.0 * a.dy_delay * a.y + 8.0 * x * x * a.y_delay
                    - 4.0 / 3.0
                    - 22.0 / 3.0 * x
                    - 7.0 * x * x
                    - 5.0 / 3.0 * x * x * x
            })
            .name("example 3: nonlinear fractional pantograph BVP")
            .proportional(0.5)
            .history(|_| 1.0, |_| 0.0)
            .boundary_value(1.0);
            if same(2.0) {
                b.exact(|x| 1.0 + x - x * x * x)
            } else {
                b
            }
            .build()
        }
        4 => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "example 4 takes an order in (0, 1], got {alpha}"
                )));
            }
            let b =
                ProblemDef::builder(alpha + 1.0, 3.0, |a: &RhsArgs| a.dy_delay + a.y - a.y_delay)
                    .name(
                        "example 4: Volterra delay integro-differential IVP (differentiated form)",
                    )
                    .delay(Delay::Constant(1.0))
                    .history(libm::exp, libm::exp)
                    .initial_slope(1.0);
            if same(1.0) { b.exact(libm::exp) } else { b }.build()
        }
        _ => unreachable!(),
    }
}
