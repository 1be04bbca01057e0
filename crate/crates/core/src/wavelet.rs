//! The Legendre wavelet trial space on `[0, l)`.
//!
//! For resolution level `k` the domain splits into `2^(k-1)` subintervals of
//! width `h = l / 2^(k-1)`. On subinterval `n` (1-based) the basis functions are
//!
//! ```text
//! ψ_{n,m}(x) = 2^(k/2) sqrt((2m + 1) / (2l)) P_m(2^k x / l - 2n + 1),   m = 0..M-1
//! ```
//!
//! and zero elsewhere. Subintervals are half-open except the last one, which is
//! closed at `x = l` so that a left limit at `l` is a plain evaluation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::orthopoly::{legendre_sequence, JacobiParams, LegendreValue};
use crate::quadrature::{gauss_jacobi, gauss_legendre, QuadratureRule};
use crate::{gamma, Error, Result};

/// Resolution level `k`, polynomials per subinterval `M`, and domain length `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisConfig {
    k: u32,
    m: usize,
    l: f64,
}

impl BasisConfig {
    pub fn new(k: u32, m: usize, l: f64) -> Result<Self> {
        if k == 0 || k > 30 {
            return Err(Error::InvalidArgument(format!(
                "resolution level k must be in 1..=30, got {k}"
            )));
        }
        if m < 3 {
            return Err(Error::InvalidArgument(format!(
                "at least three polynomials per subinterval are required, got M = {m}"
            )));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "domain length must be positive, got {l}"
            )));
        }
        Ok(Self { k, m, l })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of polynomials per subinterval.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Number of subintervals, `2^(k-1)`.
    pub fn intervals(&self) -> usize {
        1 << (self.k - 1)
    }

    /// Dimension of the trial space, `2^(k-1) M`.
    pub fn dimension(&self) -> usize {
        self.intervals() * self.m
    }

    /// Subinterval width `l / 2^(k-1)`.
    pub fn width(&self) -> f64 {
        self.l / self.intervals() as f64
    }

    /// Left endpoint of subinterval `n` (1-based); `breakpoint(intervals() + 1) == l`.
    pub fn breakpoint(&self, n: usize) -> f64 {
        self.l * (n - 1) as f64 / self.intervals() as f64
    }

    /// Interior breakpoints `x_b = (i - 1) h`, `i = 2..=2^(k-1)`.
    pub fn interior_breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        (2..=self.intervals()).map(move |i| self.breakpoint(i))
    }

    /// Flat index of `ψ_{n,m}` in a [`CoefficientVector`].
    pub fn flat_index(&self, idx: WaveletIndex) -> usize {
        (idx.n - 1) * self.m + idx.m
    }

    /// `2^(k/2) sqrt((2m + 1)/(2l))`.
    fn amplitude(&self, m: usize) -> f64 {
        libm::pow(2.0, 0.5 * self.k as f64) * libm::sqrt((2 * m + 1) as f64 / (2.0 * self.l))
    }

    /// Chain-rule factor `(2^k / l)^order`.
    fn stretch(&self, order: usize) -> f64 {
        libm::pow(libm::pow(2.0, self.k as f64) / self.l, order as f64)
    }

    /// Local coordinate in `[-1, 1]` of `x` with respect to subinterval `n`.
    /// Valid for any real `x` (polynomial extension of the block).
    pub fn local_coordinate(&self, n: usize, x: f64) -> f64 {
        2.0 * x * self.intervals() as f64 / self.l - 2.0 * n as f64 + 1.0
    }

    /// Subinterval containing `x` under the half-open convention, with the last
    /// subinterval closed at `l`.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if !(0.0..=self.l).contains(&x) {
            return Err(Error::OutOfDomain { x, l: self.l });
        }
        let scaled = x * self.intervals() as f64 / self.l;
        Ok((libm::floor(scaled) as usize + 1).min(self.intervals()))
    }

    pub(crate) fn check_order(order: usize, max: usize) -> Result<()> {
        if order > max {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be at most {max}, got {order}"
            )));
        }
        Ok(())
    }
}

/// Translation index `n ∈ [1, 2^(k-1)]` and degree `m ∈ [0, M-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveletIndex {
    pub n: usize,
    pub m: usize,
}

impl WaveletIndex {
    pub fn new(config: &BasisConfig, n: usize, m: usize) -> Result<Self> {
        if n == 0 || n > config.intervals() || m >= config.m() {
            return Err(Error::InvalidArgument(format!(
                "wavelet index (n = {n}, m = {m}) outside 1..={} × 0..{}",
                config.intervals(),
                config.m()
            )));
        }
        Ok(Self { n, m })
    }

    /// All indices in coefficient order (n-major, m-minor).
    pub fn all(config: &BasisConfig) -> impl Iterator<Item = WaveletIndex> {
        let m = config.m();
        (1..=config.intervals()).flat_map(move |n| (0..m).map(move |mm| WaveletIndex { n, m: mm }))
    }
}

/// Expansion coefficients `a_{n,m}`, ordered n-major then m.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn zeros(config: &BasisConfig) -> Self {
        Self(vec![0.0; config.dimension()])
    }

    pub fn from_values(config: &BasisConfig, values: Vec<f64>) -> Result<Self> {
        if values.len() != config.dimension() {
            return Err(Error::DimensionMismatch {
                expected: config.dimension(),
                actual: values.len(),
            });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficients of subinterval `n` (1-based).
    pub fn block(&self, config: &BasisConfig, n: usize) -> &[f64] {
        let m = config.m();
        &self.0[(n - 1) * m..n * m]
    }
}

impl Index<usize> for CoefficientVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CoefficientVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Caputo order `α ∈ (1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "fractional order must lie in (1, 2], got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Values of all `M` basis functions of one subinterval (or their derivative)
/// at a point. Only that block is non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRow {
    /// 1-based subinterval index.
    pub n: usize,
    pub values: Vec<f64>,
}

impl BasisRow {
    /// `Σ_m a_{n,m} values[m]`.
    pub fn dot(&self, config: &BasisConfig, coeffs: &[f64]) -> f64 {
        let m = config.m();
        let base = (self.n - 1) * m;
        self.values
            .iter()
            .zip(&coeffs[base..base + m])
            .map(|(v, a)| v * a)
            .sum()
    }
}

impl BasisConfig {
    /// Derivative of order `deriv ≤ 2` of every basis polynomial of block `n`
    /// at `x`, using the block's polynomial even when `x` is outside its
    /// support. This is how one-sided limits at breakpoints are evaluated.
    pub fn block_row(&self, n: usize, x: f64, deriv: usize) -> BasisRow {
        let t = self.local_coordinate(n, x);
        let mut table = vec![
            LegendreValue {
                value: 0.0,
                d1: 0.0,
                d2: 0.0
            };
            self.m
        ];
        legendre_sequence(t, &mut table);
        let stretch = self.stretch(deriv);
        let values = table
            .iter()
            .enumerate()
            .map(|(m, p)| {
                let raw = match deriv {
                    0 => p.value,
                    1 => p.d1,
                    _ => p.d2,
                };
                self.amplitude(m) * stretch * raw
            })
            .collect();
        BasisRow { n, values }
    }

    /// Basis row at `x` under the support convention.
    pub fn basis_row(&self, x: f64, deriv: usize) -> Result<BasisRow> {
        Self::check_order(deriv, 2)?;
        let n = self.locate(x)?;
        Ok(self.block_row(n, x, deriv))
    }
}

fn psi_any(config: &BasisConfig, idx: WaveletIndex, deriv: usize, x: f64) -> Result<f64> {
    let n = config.locate(x)?;
    if n != idx.n {
        return Ok(0.0);
    }
    Ok(config.block_row(n, x, deriv).values[idx.m])
}

/// `ψ_{n,m}(x)`.
pub fn psi(config: &BasisConfig, idx: WaveletIndex, x: f64) -> Result<f64> {
    psi_any(config, idx, 0, x)
}

/// First or second derivative of `ψ_{n,m}` at `x`; right limit at interior
/// breakpoints, left limit at `x = l`.
pub fn psi_deriv(config: &BasisConfig, idx: WaveletIndex, order: usize, x: f64) -> Result<f64> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "wavelet derivative order must be 1 or 2, got {order}"
        )));
    }
    psi_any(config, idx, order, x)
}

/// `Σ a_{n,m} ψ_{n,m}^(deriv)(x)`; only the active block contributes.
pub fn synthesize(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    x: f64,
    deriv: usize,
) -> Result<f64> {
    if coeffs.len() != config.dimension() {
        return Err(Error::DimensionMismatch {
            expected: config.dimension(),
            actual: coeffs.len(),
        });
    }
    Ok(config.basis_row(x, deriv)?.dot(config, coeffs.as_slice()))
}

/// Orthogonal projection `a_{n,m} = ∫_0^l f ψ_{n,m} dx`, computed per
/// subinterval with an `(M + 8)`-point Gauss–Legendre rule.
pub fn project<F: FnMut(f64) -> f64>(config: &BasisConfig, f: F) -> CoefficientVector {
    project_with_order(config, f, config.m() + 8)
}

pub(crate) fn project_with_order<F: FnMut(f64) -> f64>(
    config: &BasisConfig,
    mut f: F,
    order: usize,
) -> CoefficientVector {
    let rule = gauss_legendre(order).expect("Gauss-Legendre construction");
    let mut out = CoefficientVector::zeros(config);
    let m = config.m();
    for n in 1..=config.intervals() {
        let (a, b) = (config.breakpoint(n), config.breakpoint(n + 1));
        for (x, w) in rule.mapped(a, b) {
            let fx = f(x);
            let row = config.block_row(n, x, 0);
            for (j, v) in row.values.iter().enumerate() {
                out[(n - 1) * m + j] += w * fx * v;
            }
        }
    }
    out
}

/// Caputo derivative of the wavelet basis for a fixed order `α`.
///
/// Owns the Gauss–Jacobi rule with `λ = 1 - α`, `ν = 0` and
/// `N = ⌈(M - 2)/2⌉` points, built once at construction. With that `N` the
/// rule integrates `(x - s)^(1-α) ψ''(s)` exactly on any piece where `ψ''`
/// is a single polynomial of degree `M - 3`.
#[derive(Debug, Clone)]
pub struct CaputoOperator {
    config: BasisConfig,
    alpha: FracOrder,
    /// `None` for `α = 2`, where the operator is the plain second derivative.
    rule: Option<QuadratureRule>,
}

impl CaputoOperator {
    pub fn new(config: BasisConfig, alpha: FracOrder) -> Result<Self> {
        let rule = if alpha.value() < 2.0 {
            let nodes = (config.m() - 2).div_ceil(2);
            Some(gauss_jacobi(
                JacobiParams::new(1.0 - alpha.value(), 0.0)?,
                nodes,
            )?)
        } else {
            None
        };
        Ok(Self {
            config,
            alpha,
            rule,
        })
    }

    pub fn config(&self) -> &BasisConfig {
        &self.config
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn rule(&self) -> Option<&QuadratureRule> {
        self.rule.as_ref()
    }

    /// `∫_c^x (x - s)^(1-α) q(s) ds` for the polynomial `q` of block `n`,
    /// one value per degree `m`, accumulated into `out`.
    fn singular_piece(
        &self,
        rule: &QuadratureRule,
        n: usize,
        c: f64,
        x: f64,
        sign: f64,
        out: &mut [f64],
    ) {
        let span = x - c;
        if span <= 0.0 {
            return;
        }
        let two_minus_alpha = 2.0 - self.alpha.value();
        let scale = sign * libm::pow(0.5 * span, two_minus_alpha) / gamma(two_minus_alpha);
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let s = c + 0.5 * span * (t + 1.0);
            let row = self.config.block_row(n, s, 2);
            for (o, v) in out.iter_mut().zip(&row.values) {
                *o += scale * w * v;
            }
        }
    }

    /// `^cD^α ψ_{n,m}(x)` for every `m` of block `n`, written to `out`.
    fn block_values(&self, n: usize, x: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let a = self.config.breakpoint(n);
        let b = self.config.breakpoint(n + 1);
        let Some(rule) = &self.rule else {
            if self.config.locate(x).ok() == Some(n) {
                out.copy_from_slice(&self.config.block_row(n, x, 2).values);
            }
            return;
        };
        if x <= a {
            return;
        }
        let in_support = x < b || n == self.config.intervals();
        self.singular_piece(rule, n, a, x, 1.0, out);
        if !in_support {
            // ∫_a^b = ∫_a^x - ∫_b^x with the polynomial extended past b.
            self.singular_piece(rule, n, b, x, -1.0, out);
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(0.0..=self.config.l()).contains(&x) {
            return Err(Error::OutOfDomain {
                x,
                l: self.config.l(),
            });
        }
        Ok(())
    }

    /// `^cD^α ψ_{n,m}(x)`.
    pub fn caputo_psi(&self, idx: WaveletIndex, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let mut buf = vec![0.0; self.config.m()];
        self.block_values(idx.n, x, &mut buf);
        Ok(buf[idx.m])
    }

    /// `^cD^α ψ_{n,m}(x)` for every basis function, in coefficient order.
    pub fn caputo_row(&self, x: f64) -> Result<Vec<f64>> {
        self.check_x(x)?;
        let m = self.config.m();
        let mut row = vec![0.0; self.config.dimension()];
        for (n, chunk) in row.chunks_mut(m).enumerate() {
            self.block_values(n + 1, x, chunk);
        }
        Ok(row)
    }

    /// `^cD^α` of the expansion with coefficients `coeffs` at `x`.
    pub fn apply(&self, coeffs: &CoefficientVector, x: f64) -> Result<f64> {
        Ok(self
            .caputo_row(x)?
            .iter()
            .zip(coeffs.as_slice())
            .map(|(d, a)| d * a)
            .sum())
    }
}

/// One-shot `^cD^α ψ_{n,m}(x)`; builds the quadrature rule on every call.
/// Prefer a [`CaputoOperator`] when evaluating repeatedly.
pub fn caputo_psi(
    config: &BasisConfig,
    idx: WaveletIndex,
    alpha: FracOrder,
    x: f64,
) -> Result<f64> {
    CaputoOperator::new(*config, alpha)?.caputo_psi(idx, x)
}
