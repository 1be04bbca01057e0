//! Reference evaluations that share no code with the library: adaptive
//! Gauss–Kronrod quadrature, explicit-sum Legendre polynomials, and
//! substitutions that remove algebraic endpoint singularities.
// Kronrod constants are kept at their published precision.
#![allow(clippy::excessive_precision, dead_code)]

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let pair = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// `∫_a^b f` for integrands smooth on `[a, b]`. Globally adaptive: the
/// piece with the largest error estimate is bisected until the summed
/// estimate drops below `1e-14` relative.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut err = e;
    for _ in 0..2000 {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        if err <= 1e-14 * total.abs() + 1e-300 {
            break;
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3))
            .unwrap();
        let (lo, hi, _, e) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (lv, le) = gk15(&f, lo, mid);
        let (rv, re) = gk15(&f, mid, hi);
        // estimates at the rounding level of the piece itself are noise
        let noise = 50.0 * f64::EPSILON * (lv.abs() + rv.abs());
        let (le, re) = if le + re <= noise {
            (0.0, 0.0)
        } else {
            (le, re)
        };
        err += le + re - e;
        parts.push((lo, mid, lv, le));
        parts.push((mid, hi, rv, re));
    }
    parts.iter().map(|p| p.2).sum()
}

/// `∫_a^b f`, split at every listed point inside `(a, b)`.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cuts: &[f64]) -> f64 {
    let mut pts = vec![a];
    pts.extend(cuts.iter().copied().filter(|&c| c > a && c < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.windows(2).map(|w| integrate(&f, w[0], w[1])).sum()
}

/// `∫_{-1}^{1} (1 - x)^λ f(x) dx` via `u = (1 - x)^(1 + λ)`.
pub fn singular_moment<F: Fn(f64) -> f64>(lambda: f64, f: F) -> f64 {
    let p = 1.0 + lambda;
    let upper = 2f64.powf(p);
    integrate(|u: f64| f(1.0 - u.powf(1.0 / p)), 0.0, upper) / p
}

/// Same moment for `f = x^j`, by binomial expansion around `x = 1`.
pub fn monomial_moment(lambda: f64, j: u32) -> f64 {
    // ∫_0^2 t^λ (1 - t)^j dt
    let mut sum = 0.0;
    let mut binom = 1.0;
    for i in 0..=j {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let e = lambda + i as f64 + 1.0;
        sum += sign * binom * 2f64.powf(e) / e;
        binom = binom * (j - i) as f64 / (i + 1) as f64;
    }
    sum
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Power-series coefficients of `P_m`, lowest degree first.
pub fn legendre_coefficients(m: u32) -> Vec<f64> {
    let mut c = vec![0.0; m as usize + 1];
    for j in 0..=m / 2 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let v = sign * factorial(2 * m - 2 * j)
            / (2f64.powi(m as i32) * factorial(j) * factorial(m - j) * factorial(m - 2 * j));
        c[(m - 2 * j) as usize] = v;
    }
    c
}

/// `d^order/dt^order P_m(t)` from the explicit sum.
pub fn legendre(m: u32, order: u32, t: f64) -> f64 {
    let c = legendre_coefficients(m);
    let mut acc = 0.0;
    for (deg, coef) in c.iter().enumerate() {
        let deg = deg as u32;
        if deg < order {
            continue;
        }
        let falling: f64 = (0..order).map(|i| f64::from(deg - i)).product();
        acc += coef * falling * t.powi((deg - order) as i32);
    }
    acc
}

/// Plain description of one wavelet, independent of the library types.
#[derive(Debug, Clone, Copy)]
pub struct Wavelet {
    pub k: u32,
    pub n: u32,
    pub m: u32,
    pub l: f64,
}

impl Wavelet {
    pub fn support(&self) -> (f64, f64) {
        let w = self.l / 2f64.powi(self.k as i32 - 1);
        ((self.n - 1) as f64 * w, self.n as f64 * w)
    }

    fn stretch(&self) -> f64 {
        2f64.powi(self.k as i32) / self.l
    }

    fn amplitude(&self) -> f64 {
        2f64.powf(self.k as f64 / 2.0) * ((2 * self.m + 1) as f64 / (2.0 * self.l)).sqrt()
    }

    /// Polynomial piece of `d^order ψ` at `x`, ignoring the support cut-off.
    pub fn piece(&self, order: u32, x: f64) -> f64 {
        let t = self.stretch() * x - 2.0 * self.n as f64 + 1.0;
        self.amplitude() * self.stretch().powi(order as i32) * legendre(self.m, order, t)
    }

    pub fn value(&self, order: u32, x: f64) -> f64 {
        let (a, b) = self.support();
        let last = (b - self.l).abs() < 1e-12;
        if x >= a && (x < b || (last && x <= b)) {
            self.piece(order, x)
        } else {
            0.0
        }
    }
}

/// `(1/Γ(2-α)) ∫_c^d (x - s)^(1-α) h(s) ds` for `c < d ≤ x`, removing the
/// singularity at `s = x` by `u = (x - s)^(2-α)` when `d = x`.
pub fn weighted_piece<F: Fn(f64) -> f64>(alpha: f64, x: f64, c: f64, d: f64, h: F) -> f64 {
    if d <= c {
        return 0.0;
    }
    let q = 2.0 - alpha;
    let raw = if (x - d).abs() <= 1e-14 * (1.0 + x.abs()) {
        integrate(|u: f64| h(x - u.powf(1.0 / q)), 0.0, (x - c).powf(q)) / q
    } else {
        let mid = 0.5 * (c + d);
        // far piece is smooth; near piece keeps the substitution
        integrate(|s: f64| (x - s).powf(1.0 - alpha) * h(s), c, mid)
            + integrate(|s: f64| (x - s).powf(1.0 - alpha) * h(s), mid, d)
    };
    raw / gamma(q)
}

/// Caputo derivative of order `α ∈ (1, 2]` of a wavelet at `x`.
pub fn caputo_wavelet(w: &Wavelet, alpha: f64, x: f64) -> f64 {
    let (a, b) = w.support();
    if x <= a {
        return 0.0;
    }
    if alpha == 2.0 {
        return w.value(2, x);
    }
    let d = x.min(b);
    weighted_piece(alpha, x, a, d, |s| w.piece(2, s))
}

/// Caputo derivative of order `α ∈ (1, 2]` of a function with known second
/// derivative `y2`, split at `cuts`.
pub fn caputo_of<F: Fn(f64) -> f64>(alpha: f64, x: f64, y2: F, cuts: &[f64]) -> f64 {
    if alpha == 2.0 {
        return y2(x);
    }
    if x <= 0.0 {
        return 0.0;
    }
    let mut pts: Vec<f64> = cuts.iter().copied().filter(|&c| c > 0.0 && c < x).collect();
    pts.insert(0, 0.0);
    let last = *pts.last().unwrap();
    let q = 2.0 - alpha;
    let mut total = weighted_piece(alpha, x, last, x, &y2);
    for w in pts.windows(2) {
        total += integrate(|s: f64| (x - s).powf(1.0 - alpha) * y2(s), w[0], w[1]) / gamma(q);
    }
    total
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Reproducible uniform samples strictly inside `(lo, hi)`.
pub fn samples(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| lo + (hi - lo) * rng.gen_range(0.02..0.98))
        .collect()
}
