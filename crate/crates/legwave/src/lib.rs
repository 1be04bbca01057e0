//! Command-line driver for `legwave-core`: solves registered examples, runs
//! convergence studies and writes CSV or aligned text.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use legwave_core::analysis::{
    convergence_study, l2_error, pointwise_errors, sample_curve, ConvergenceTable, CurvePoint,
};
use legwave_core::collocation::{solve_example, Solution};
use legwave_core::nlsolve::SolverOptions;
use legwave_core::problem::{example_with_alpha, ProblemDef};
use legwave_core::wavelet::{BasisConfig, CoefficientVector, WaveletIndex};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// One solve; prints coefficients and a solution curve.
    Solve,
    /// L² errors for k = --k ..= --k-max at fixed M.
    Study,
    /// Absolute errors at the listed --points.
    Pointwise,
}

/// Solve a registered fractional delay integro-differential example with
/// Legendre wavelet collocation.
#[derive(Debug, Clone, Parser)]
#[command(name = "legwave", version, about)]
pub struct RunConfig {
    /// Registered example id (1-4).
    #[arg(long)]
    pub example: u32,
    /// Override the fractional order. For example 4 this is the order of the
    /// original equation, in (0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Legendre degrees per subinterval.
    #[arg(long = "M", default_value_t = 3)]
    pub m: usize,
    /// Resolution level (first level in study mode).
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Last resolution level in study mode.
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    #[arg(long, value_enum, default_value_t = Mode::Solve)]
    pub mode: Mode,
    /// Comma-separated evaluation points for pointwise mode.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub points: Vec<f64>,
    /// Write CSV here instead of printing a table.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Curve samples in solve mode.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Newton iteration cap.
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    /// Newton residual tolerance (infinity norm).
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] legwave_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use legwave_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(
                E::SingularJacobian { .. } | E::NonFiniteResidual { .. } | E::Quadrature { .. },
            ) => EXIT_NOT_CONVERGED,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Csv(_) => EXIT_IO,
        }
    }
}

impl RunConfig {
    pub fn solver_options(&self) -> Result<SolverOptions, CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(SolverOptions {
            max_iterations: self.max_iter,
            residual_tolerance: self.tol,
            ..SolverOptions::default()
        })
    }

    fn validate(&self) -> Result<(), CliError> {
        match self.mode {
            Mode::Study if self.k_max < self.k => Err(CliError::Usage(format!(
                "--k-max ({}) must be at least --k ({})",
                self.k_max, self.k
            ))),
            Mode::Pointwise if self.points.is_empty() => {
                Err(CliError::Usage("pointwise mode needs --points".to_string()))
            }
            Mode::Solve if self.samples < 2 => Err(CliError::Usage(format!(
                "--samples must be at least 2, got {}",
                self.samples
            ))),
            _ => Ok(()),
        }
    }
}

/// Runs one invocation. Human-readable output goes to `stdout`; CSV goes to
/// `--out` when given. Returns the exit code.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<u8, CliError> {
    cfg.validate()?;
    let opts = cfg.solver_options()?;
    let prob = example_with_alpha(cfg.example, cfg.alpha)?;
    let converged = match cfg.mode {
        Mode::Solve => run_solve(cfg, &prob, &opts, stdout)?,
        Mode::Study => run_study(cfg, &prob, &opts, stdout)?,
        Mode::Pointwise => run_pointwise(cfg, &prob, &opts, stdout)?,
    };
    Ok(if converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn exact_fn(prob: &ProblemDef) -> Option<impl Fn(f64) -> f64 + '_> {
    prob.exact().map(|f| move |x: f64| f(x))
}

fn solve_summary(prob: &ProblemDef, sol: &Solution, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{}", prob.name())?;
    writeln!(
        out,
        "alpha = {}, k = {}, M = {}, l = {}",
        prob.alpha().value(),
        sol.config.k(),
        sol.config.m(),
        sol.config.l()
    )?;
    writeln!(
        out,
        "converged = {}, iterations = {}, residual = {:.3e}",
        sol.report.converged, sol.report.iterations, sol.report.final_residual_norm
    )?;
    if let Some(f) = exact_fn(prob) {
        let err = l2_error(&sol.config, &sol.coefficients, f)?;
        writeln!(
            out,
            "L2 error = {:.6e}, max error = {:.6e}",
            err.l2_error, err.max_abs_error
        )?;
    }
    Ok(())
}

fn run_solve(
    cfg: &RunConfig,
    prob: &ProblemDef,
    opts: &SolverOptions,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let sol = solve_example(prob, cfg.k, cfg.m, opts)?;
    solve_summary(prob, &sol, out)?;
    let exact = prob.exact().cloned();
    let exact_ref = exact.as_ref().map(|f| f.as_ref() as &dyn Fn(f64) -> f64);
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)?;
            emit_curve(&sol.config, &sol.coefficients, cfg.samples, exact_ref, file)?;
            writeln!(out, "curve written to {}", path.display())?;
        }
        None => {
            writeln!(out)?;
            write_coefficients(&sol.config, &sol.coefficients, out)?;
            writeln!(out)?;
            let points = sample_curve(&sol.config, &sol.coefficients, cfg.samples, exact_ref)?;
            write_curve_text(&points, out)?;
        }
    }
    if !sol.report.converged {
        eprintln!("warning: Newton iteration did not converge");
    }
    Ok(sol.report.converged)
}

fn run_study(
    cfg: &RunConfig,
    prob: &ProblemDef,
    opts: &SolverOptions,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    if prob.exact().is_none() {
        return Err(CliError::Usage(format!(
            "{} has no exact solution at alpha = {}; study mode needs one",
            prob.name(),
            prob.alpha().value()
        )));
    }
    let table = convergence_study(prob, cfg.m, cfg.k..=cfg.k_max, opts)?;
    match &cfg.out {
        Some(path) => {
            write_study_csv(&table, File::create(path)?)?;
            writeln!(out, "study written to {}", path.display())?;
        }
        None => write_study_text(&table, out)?,
    }
    if !table.all_converged() {
        eprintln!("warning: some levels did not converge");
    }
    Ok(table.all_converged())
}

fn run_pointwise(
    cfg: &RunConfig,
    prob: &ProblemDef,
    opts: &SolverOptions,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let sol = solve_example(prob, cfg.k, cfg.m, opts)?;
    let values = cfg
        .points
        .iter()
        .map(|&x| legwave_core::wavelet::synthesize(&sol.config, &sol.coefficients, x, 0))
        .collect::<Result<Vec<_>, _>>()?;
    let errors = match exact_fn(prob) {
        Some(f) => Some(pointwise_errors(
            &sol.config,
            &sol.coefficients,
            f,
            &cfg.points,
        )?),
        None => None,
    };
    let exact = prob.exact();
    let rows: Vec<PointRow> = cfg
        .points
        .iter()
        .enumerate()
        .map(|(i, &x)| PointRow {
            x,
            y: values[i],
            exact: exact.map(|f| f(x)),
            abs_error: errors.as_ref().map(|e| e[i]),
        })
        .collect();
    match &cfg.out {
        Some(path) => {
            write_points_csv(&rows, File::create(path)?)?;
            writeln!(out, "pointwise errors written to {}", path.display())?;
        }
        None => {
            solve_summary(prob, &sol, out)?;
            writeln!(out)?;
            write_points_text(&rows, out)?;
        }
    }
    Ok(sol.report.converged)
}

/// Full-precision scientific notation; parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_value(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

/// Writes `samples` uniform points of the expansion as CSV with columns
/// `x,y,exact` (`exact` left empty when unknown).
pub fn emit_curve<W: Write>(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    samples: usize,
    exact: Option<&dyn Fn(f64) -> f64>,
    sink: W,
) -> Result<(), CliError> {
    let points = sample_curve(config, coeffs, samples, exact)?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["x", "y", "exact"])?;
    for p in points {
        w.write_record([format_value(p.x), format_value(p.y), opt_value(p.exact)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_study_csv<W: Write>(table: &ConvergenceTable, sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["k", "M", "alpha", "l2_error", "ratio", "converged"])?;
    for r in &table.rows {
        w.write_record([
            r.k.to_string(),
            r.m.to_string(),
            format_value(r.alpha),
            opt_value(r.l2_error),
            opt_value(r.ratio),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRow {
    pub x: f64,
    pub y: f64,
    pub exact: Option<f64>,
    pub abs_error: Option<f64>,
}

pub fn write_points_csv<W: Write>(rows: &[PointRow], sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["x", "y", "exact", "abs_error"])?;
    for r in rows {
        w.write_record([
            format_value(r.x),
            format_value(r.y),
            opt_value(r.exact),
            opt_value(r.abs_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn text_opt(v: Option<f64>, missing: &str) -> String {
    v.map_or_else(|| missing.to_string(), |v| format!("{v:.6e}"))
}

pub fn write_study_text(table: &ConvergenceTable, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:>3} {:>3} {:>6} {:>14} {:>10} {:>9}",
        "k", "M", "alpha", "l2_error", "ratio", "converged"
    )?;
    for r in &table.rows {
        let ratio = r
            .ratio
            .map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        writeln!(
            out,
            "{:>3} {:>3} {:>6} {:>14} {:>10} {:>9}",
            r.k,
            r.m,
            r.alpha,
            text_opt(r.l2_error, "failed"),
            ratio,
            r.converged
        )?;
    }
    Ok(())
}

fn write_coefficients(
    config: &BasisConfig,
    coeffs: &CoefficientVector,
    out: &mut dyn Write,
) -> io::Result<()> {
    writeln!(out, "{:>4} {:>4} {:>24}", "n", "m", "a_nm")?;
    for idx in WaveletIndex::all(config) {
        writeln!(
            out,
            "{:>4} {:>4} {:>24.16e}",
            idx.n,
            idx.m,
            coeffs[config.flat_index(idx)]
        )?;
    }
    Ok(())
}

fn write_curve_text(points: &[CurvePoint], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{:>14} {:>14} {:>14}", "x", "y", "exact")?;
    for p in points {
        writeln!(
            out,
            "{:>14.6e} {:>14.6e} {:>14}",
            p.x,
            p.y,
            text_opt(p.exact, "-")
        )?;
    }
    Ok(())
}

fn write_points_text(rows: &[PointRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:>14} {:>14} {:>14} {:>14}",
        "x", "y", "exact", "abs_error"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:>14.6e} {:>14.6e} {:>14} {:>14}",
            r.x,
            r.y,
            text_opt(r.exact, "-"),
            text_opt(r.abs_error, "-")
        )?;
    }
    Ok(())
}
