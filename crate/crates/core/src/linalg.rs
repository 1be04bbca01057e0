//! Small dense linear algebra kernels: the symmetric tridiagonal eigensolver
//! used by Golub–Welsch and an LU factorisation with partial pivoting for the
//! Newton step.

use alloc::vec;
use alloc::vec::Vec;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (length `n - 1`), plus the first component of every
/// normalised eigenvector. Implicit QL with Wilkinson-type shifts.
///
/// Returns `None` if some eigenvalue fails to converge in 60 sweeps.
pub(crate) fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    debug_assert!(off.len() + 1 == n || (n == 0 && off.is_empty()));
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    // first row of the accumulated eigenvector matrix
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == 60 {
                return None;
            }
            iter += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some((d, z))
}

/// Dense row-major LU factorisation with partial pivoting.
pub(crate) struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorises the `n × n` row-major matrix. Returns `None` when a pivot is
    /// exactly zero or below `n · eps · max|a|`.
    pub(crate) fn factor(n: usize, mut a: Vec<f64>) -> Option<Self> {
        debug_assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        let tiny = scale * f64::EPSILON * n as f64 * 1e-3;
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (piv, pmax) =
                (col..n)
                    .map(|r| (r, a[r * n + col].abs()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax <= tiny {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                a[r * n + col] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        a[r * n + j] -= factor * a[col * n + j];
                    }
                }
            }
        }
        Some(Self { n, a, perm })
    }

    pub(crate) fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = &self.a[i * n..i * n + i];
            x[i] -= row.iter().zip(&x[..i]).map(|(a, b)| a * b).sum::<f64>();
        }
        for i in (0..n).rev() {
            let row = &self.a[i * n + i + 1..(i + 1) * n];
            let acc = x[i] - row.iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum::<f64>();
            x[i] = acc / self.a[i * n + i];
        }
        x
    }
}
