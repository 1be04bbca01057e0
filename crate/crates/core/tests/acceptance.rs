//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails afterwards if any criterion failed.

mod common;

use std::time::{Duration, Instant};

use legwave_core::analysis::{convergence_study, l2_error, pointwise_errors};
use legwave_core::collocation::solve_example;
use legwave_core::nlsolve::SolverOptions;
use legwave_core::orthopoly::JacobiParams;
use legwave_core::problem::example_registry;
use legwave_core::quadrature::{gauss_jacobi, gauss_legendre};
use legwave_core::wavelet::{
    caputo_psi, project, psi, BasisConfig, CaputoOperator, FracOrder, WaveletIndex,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = run();
    let took = start.elapsed();
    out.detail = format!("{} [{:.2?} of {:?}]", out.detail, took, limit);
    out.pass &= took < limit;
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "failed".to_string(), |e| format!("{e:.2e}"))
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|e| format!("{e:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn closed_form_recovery() -> Outcome {
    timed(Duration::from_secs(1), || {
        let p = example_registry(1).unwrap();
        let sol = solve_example(&p, 1, 3, &SolverOptions::default()).unwrap();
        let want = [
            4.0 * 2f64.sqrt() / 3.0,
            2.0 * (2.0f64 / 3.0).sqrt(),
            2.0 / 3.0 * (2.0f64 / 5.0).sqrt(),
        ];
        let coef_err = sol
            .coefficients
            .as_slice()
            .iter()
            .zip(want)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let pts: Vec<f64> = (0..100).map(|i| 2.0 * i as f64 / 99.0).collect();
        let curve_err = pointwise_errors(&sol.config, &sol.coefficients, |x| x * x, &pts)
            .unwrap()
            .into_iter()
            .fold(0.0f64, f64::max);
        check(
            sol.report.converged && coef_err < 1e-10 && curve_err < 1e-10,
            format!("coefficient error {coef_err:.2e}, curve error {curve_err:.2e}"),
        )
    })
}

fn example_three_exact() -> Outcome {
    timed(Duration::from_secs(1), || {
        let p = example_registry(3).unwrap();
        let sol = solve_example(&p, 1, 4, &SolverOptions::default()).unwrap();
        let err = l2_error(&sol.config, &sol.coefficients, |x| 1.0 + x - x.powi(3)).unwrap();
        check(
            sol.report.converged && err.max_abs_error < 1e-8,
            format!("max error {:.2e}", err.max_abs_error),
        )
    })
}

/// Errors within `tol` relative of `printed`; returns the worst deviation.
fn table_match(errors: &[Option<f64>], printed: &[f64], tol: f64) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut ok = errors.len() == printed.len();
    for (e, p) in errors.iter().zip(printed) {
        match e {
            Some(e) => {
                worst = worst.max(rel(*e, *p));
                ok &= rel(*e, *p) <= tol;
            }
            None => ok = false,
        }
    }
    (ok, worst)
}

fn example_three_table() -> Outcome {
    timed(Duration::from_secs(30), || {
        let p = example_registry(3).unwrap();
        let table = convergence_study(&p, 3, 1..=6, &SolverOptions::default()).unwrap();
        let printed = [1.76e-1, 6.89e-2, 3.43e-2, 1.68e-2, 8.34e-3, 4.15e-3];
        let (ok, worst) = table_match(&table.errors(), &printed, 0.10);
        let ratios: Vec<f64> = table.rows[2..].iter().filter_map(|r| r.ratio).collect();
        let ratios_ok = ratios.len() == 4 && ratios.iter().all(|r| (1.8..=2.6).contains(r));
        check(
            ok && ratios_ok,
            format!(
                "worst relative deviation {:.1}%, ratios k>=3 {ratios:.3?}",
                100.0 * worst
            ),
        )
    })
}

fn example_two_table() -> Outcome {
    timed(Duration::from_secs(60), || {
        let p = example_registry(2).unwrap();
        let opts = SolverOptions::default();
        let table = convergence_study(&p, 3, 1..=6, &opts).unwrap();
        let printed = [3.23e-1, 1.99e-1, 1.06e-1, 5.23e-2, 2.50e-2, 1.18e-2];
        let (ok, worst) = table_match(&table.errors(), &printed, 0.10);
        let m5 = convergence_study(&p, 5, 6..=6, &opts).unwrap().rows[0].l2_error;
        let m5_ok = m5.is_some_and(|e| e < 3e-5);
        check(
            ok && m5_ok,
            format!(
                "M=3 worst relative deviation {:.1}%, M=5 k=6 error {}",
                100.0 * worst,
                fmt_opt(m5)
            ),
        )
    })
}

fn example_four_table() -> Outcome {
    timed(Duration::from_secs(60), || {
        let p = example_registry(4).unwrap();
        let table = convergence_study(&p, 3, 1..=6, &SolverOptions::default()).unwrap();
        let printed = [5.93, 4.63, 3.18, 1.94, 1.10, 5.89e-1];
        let (ok, worst) = table_match(&table.errors(), &printed, 0.15);
        check(
            ok,
            format!("worst relative deviation {:.1}%", 100.0 * worst),
        )
    })
}

fn example_four_pointwise() -> Outcome {
    let p = example_registry(4).unwrap();
    let exact = p.exact().unwrap().clone();
    let opts = SolverOptions::default();
    let pts = [0.6, 1.2, 1.8, 2.4];
    let printed = [1.21e-8, 2.45e-8, 1.79e-7, 2.18e-7];

    let m10 = solve_example(&p, 1, 10, &opts).unwrap();
    let e10 = pointwise_errors(&m10.config, &m10.coefficients, |x| exact(x), &pts).unwrap();
    let magnitude_ok = e10
        .iter()
        .zip(printed)
        .all(|(e, p)| *e >= p / 10.0 && *e <= p * 10.0);
    let at_zero =
        pointwise_errors(&m10.config, &m10.coefficients, |x| exact(x), &[0.0]).unwrap()[0];

    let m20 = solve_example(&p, 1, 20, &opts).unwrap();
    let e20 = pointwise_errors(&m20.config, &m20.coefficients, |x| exact(x), &pts).unwrap();
    let floor_ok = e20.iter().all(|e| *e <= 1e-13);
    check(
        m10.report.converged
            && m20.report.converged
            && magnitude_ok
            && at_zero <= 1e-14
            && floor_ok,
        format!(
            "M=10 errors {}, x=0 error {at_zero:.1e}, M=20 max {:.1e}",
            fmt_list(&e10),
            e20.iter().fold(0.0f64, |m, e| m.max(*e))
        ),
    )
}

fn quadrature_exactness() -> Outcome {
    let mut worst = 0.0f64;
    for lambda in [-0.9, -0.5, -0.1] {
        let params = JacobiParams::new(lambda, 0.0).unwrap();
        for n in 1..=6 {
            let rule = gauss_jacobi(params, n).unwrap();
            for j in 0..2 * n as i32 {
                let got = rule.apply(|x| x.powi(j));
                let want = common::singular_moment(lambda, |x| x.powi(j));
                worst = worst.max(rel(got, want));
            }
        }
    }
    check(worst <= 1e-11, format!("worst relative error {worst:.2e}"))
}

fn caputo_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for k in 1..=3u32 {
        for m_count in 3..=6usize {
            let l = 1.0 + 0.5 * k as f64;
            let config = BasisConfig::new(k, m_count, l).unwrap();
            for alpha in [1.1, 1.5, 1.9] {
                let order = FracOrder::new(alpha).unwrap();
                for idx in WaveletIndex::all(&config) {
                    let w = common::Wavelet {
                        k,
                        n: idx.n as u32,
                        m: idx.m as u32,
                        l,
                    };
                    let seed = u64::from(k) * 1000 + (m_count * 100 + idx.n * 10 + idx.m) as u64;
                    for x in common::samples(seed, 10, 0.0, l) {
                        let got = caputo_psi(&config, idx, order, x).unwrap();
                        let want = common::caputo_wavelet(&w, alpha, x);
                        worst = worst.max((got - want).abs() / want.abs().max(1.0));
                        cases += 1;
                    }
                }
            }
        }
    }

    // Caputo of x^β through project + operator, β = 2, 3
    let mut monomial = 0.0f64;
    for beta in [2i32, 3] {
        let config = BasisConfig::new(2, 5, 2.0).unwrap();
        let coeffs = project(&config, |x| x.powi(beta));
        for alpha in [1.1, 1.5, 1.9] {
            let op = CaputoOperator::new(config, FracOrder::new(alpha).unwrap()).unwrap();
            let b = f64::from(beta);
            for x in common::samples(beta as u64, 10, 0.0, 2.0) {
                let want =
                    common::gamma(b + 1.0) / common::gamma(b + 1.0 - alpha) * x.powf(b - alpha);
                let got = op.apply(&coeffs, x).unwrap();
                monomial = monomial.max((got - want).abs() / want.abs().max(1.0));
            }
        }
    }
    check(
        worst <= 1e-9 && monomial <= 1e-8,
        format!("{cases} basis evaluations, worst error {worst:.2e}; monomial identity worst {monomial:.2e}"),
    )
}

fn orthonormality() -> Outcome {
    let mut worst = 0.0f64;
    for (k, m) in [(1u32, 5usize), (3, 4)] {
        let config = BasisConfig::new(k, m, 1.0).unwrap();
        let rule = gauss_legendre(m + 2).unwrap();
        let basis: Vec<WaveletIndex> = WaveletIndex::all(&config).collect();
        for a in &basis {
            for b in &basis {
                let mut g = 0.0;
                for n in 1..=config.intervals() {
                    let (lo, hi) = (config.breakpoint(n), config.breakpoint(n + 1));
                    g += rule
                        .mapped(lo, hi)
                        .map(|(x, w)| {
                            w * psi(&config, *a, x).unwrap() * psi(&config, *b, x).unwrap()
                        })
                        .sum::<f64>();
                }
                let target: f64 = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
    }
    check(worst < 1e-11, format!("max Gram deviation {worst:.2e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 closed-form recovery, example 1", closed_form_recovery),
        ("2 exactness, example 3 with M=4", example_three_exact),
        ("3 L2 error table, example 3", example_three_table),
        ("4 L2 error table, example 2", example_two_table),
        ("5 L2 error table, example 4", example_four_table),
        ("6 pointwise errors, example 4", example_four_pointwise),
        ("7 Gauss-Jacobi exactness", quadrature_exactness),
        ("8 Caputo operator vs oracle", caputo_oracle),
        ("9 basis orthonormality", orthonormality),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let out = run();
        println!(
            "{} criterion {name}: {}",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
        if !out.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
