//! Adaptive Gauss–Legendre quadrature on a bounded interval.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NODES: usize = 20;

/// Nodes and weights of the `NODES`-point rule on `[-1, 1]`.
fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

fn fixed<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule()
        .iter()
        .map(|&(x, w)| f(mid + half * x) * w)
        .sum::<Complex64>()
        * half
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub intervals: usize,
}

/// Integrates `f` over `[a, b]` by repeated bisection until each piece's
/// two-half estimate agrees with the one-panel estimate to its share of
/// `rel_tol · ∫|f|`. Fails when any piece still disagrees at `max_depth`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: usize,
) -> Result<Quadrature> {
    let abs_ref = fixed(&|t| Complex64::new(f(t).norm(), 0.0), a, b).re.abs();
    let budget = (rel_tol * abs_ref).max(f64::MIN_POSITIVE);
    let width = (b - a).abs();

    let mut value = Complex64::new(0.0, 0.0);
    let mut error_estimate = 0.0;
    let mut intervals = 0usize;
    let mut worst = 0.0f64;
    let mut failed = false;
    let mut stack = vec![(a, b, fixed(&f, a, b), 0usize)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = fixed(&f, lo, mid);
        let right = fixed(&f, mid, hi);
        let diff = (left + right - whole).norm();
        let allowed = budget * (hi - lo).abs() / width;
        if diff <= allowed || depth >= max_depth {
            if diff > allowed {
                failed = true;
                worst = worst.max(diff);
            }
            value += left + right;
            error_estimate += diff;
            intervals += 1;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    if failed {
        return Err(Error::NonConvergence {
            what: "adaptive Gauss-Legendre quadrature",
            iterations: max_depth,
            achieved: error_estimate.max(worst),
        });
    }
    Ok(Quadrature {
        value,
        error_estimate,
        intervals,
    })
}

const TANH_SINH_LEVELS: usize = 12;
const TANH_SINH_RANGE: f64 = 6.5;

/// Tanh-sinh quadrature on `(0, 1)` for integrands with algebraic endpoint
/// singularities. `f` receives `t` and `1 − t`, both computed without
/// cancellation. The step is halved until two levels agree to
/// `rel_tol · ∫|f|`.
pub fn integrate_unit_tanh_sinh<F: Fn(f64, f64) -> Complex64>(f: F, rel_tol: f64) -> Result<Quadrature> {
    let node = |s: f64| -> (Complex64, f64) {
        let u = std::f64::consts::FRAC_PI_2 * s.sinh();
        let t = 1.0 / (1.0 + (-2.0 * u).exp());
        let one_minus = 1.0 / (1.0 + (2.0 * u).exp());
        let w = std::f64::consts::FRAC_PI_2 * s.cosh() * t * one_minus * 2.0;
        if t <= 0.0 || one_minus <= 0.0 || w == 0.0 {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let v = f(t, one_minus);
        (v * w, v.norm() * w)
    };
    let mut h = 1.0;
    let (mut sum, mut abs_sum) = node(0.0);
    let mut k = 1;
    while k as f64 * h <= TANH_SINH_RANGE {
        for s in [k as f64 * h, -(k as f64) * h] {
            let (v, a) = node(s);
            sum += v;
            abs_sum += a;
        }
        k += 1;
    }
    let mut prev = sum * h;
    for level in 1..=TANH_SINH_LEVELS {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= TANH_SINH_RANGE {
            for s in [k as f64 * h, -(k as f64) * h] {
                let (v, a) = node(s);
                sum += v;
                abs_sum += a;
            }
            k += 2;
        }
        let value = sum * h;
        let diff = (value - prev).norm();
        if level >= 3 && diff <= rel_tol * abs_sum * h {
            return Ok(Quadrature {
                value,
                error_estimate: diff,
                intervals: level,
            });
        }
        prev = value;
    }
    Err(Error::NonConvergence {
        what: "tanh-sinh quadrature",
        iterations: TANH_SINH_LEVELS,
        achieved: (sum * h - prev).norm(),
    })
}
