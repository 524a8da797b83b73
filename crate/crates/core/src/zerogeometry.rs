//! Where the zeros of Whittaker and Kummer functions can lie.
//!
//! For real `k, l` with `2l − 1 ≥ 0` the nontrivial zeros of `M_{k,l}` are
//! purely imaginary when `k = 0`, in the open right half-plane when `k > 0`
//! and in the open left half-plane when `k < 0`; for `k ≠ 0` they obey
//!
//! ```text
//! 4k² Im(z)² − (4(l² − k²) − 1) Re(z)² > 0,
//! ```
//!
//! and every non-real zero has `|z| > √(4l² − 1)`. Through
//! `a = 1/2 + l − k`, `b = 1 + 2l` the same statements hold for `Φ(a, b, ·)`
//! with `b ≥ 2`. An older, stronger claim (`Re z > 2k` for `k > 0`) fails on
//! the family `k = l + 3/2`, whose only nontrivial zero is `z = 1 + 2l`.
//!
//! All predicates are evaluated only at points that pass a residual test:
//! the propositions say nothing about non-zeros.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperfunc::{
    kummer_phi, kummer_phi_detailed, whittaker_m, whittaker_m_derivative, KummerParams,
    WhittakerParams, DEFAULT_TOL,
};
use crate::polycore::factorial;
use num_traits::ToPrimitive;

/// A point counts as a zero when `|Φ(z)| ≤ ZERO_GATE · Σ|t_k|`.
pub const ZERO_GATE: f64 = 1e-6;
/// Tolerance of the imaginary-axis test.
pub const AXIS_TOL: f64 = 1e-9;
/// Curve samples must satisfy `|M| < CURVE_RTOL · scale`.
pub const CURVE_RTOL: f64 = 1e-9;

/// Which case of the location result applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionCase {
    /// `k = 0` (equivalently `b = 2a`): zeros on the imaginary axis.
    Axis,
    /// `k > 0` (`b > 2a`): zeros in the right half-plane.
    Right,
    /// `k < 0` (`b < 2a`): zeros in the left half-plane.
    Left,
}

/// Whether the hyperbola inequality says anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    /// The quadratic form is indefinite: the inequality restricts `z`.
    Informative,
    /// `4(l² − k²) − 1 ≤ 0`: every `z` off the origin satisfies it.
    Vacuous,
    /// The axis case, where no hyperbola bound is stated.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegionPredicates {
    pub imaginary_axis: bool,
    pub right_half: bool,
    pub left_half: bool,
    pub hyperbola_bound: bool,
    pub modulus_bound: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegionApplicable {
    pub k_zero: bool,
    pub k_positive: bool,
    pub k_negative: bool,
    /// The modulus bound concerns non-real zeros only.
    pub modulus: bool,
}

/// Location predicates at a verified zero.
#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    pub z: Complex64,
    /// `|Φ(z)| / Σ|t_k|` of the underlying Kummer function.
    pub relative_residual: f64,
    /// The hypothesis (`2l − 1 ≥ 0`, resp. `b ≥ 2`) holds.
    pub hypothesis: bool,
    pub case: RegionCase,
    pub predicates: RegionPredicates,
    pub applicable: RegionApplicable,
    pub hyperbola: BoundStatus,
    /// Whether every predicate that applies holds. `None` when the
    /// hypothesis fails and no judgment is made.
    pub verdict: Option<bool>,
}

fn gate(p: &KummerParams, z: Complex64) -> Result<f64> {
    let v = kummer_phi_detailed(p, z, DEFAULT_TOL)?;
    let rel = v.value.norm() / v.magnitude;
    if rel > ZERO_GATE {
        return Err(Error::Precondition(format!(
            "z = {z} is not a zero of Phi({}, {}, .): relative residual {rel:e}",
            p.a(),
            p.b()
        )));
    }
    Ok(rel)
}

/// `diff = b − 2a = 2k`, `form = 4a(b − a) − 2b = 4(l² − k²) − 1`,
/// `radius² = b(b − 2) = 4l² − 1`.
fn region(z: Complex64, diff: f64, form: f64, radius_sq: f64, hypothesis: bool, rel: f64) -> RegionReport {
    let case = if diff.abs() <= 1e-12 {
        RegionCase::Axis
    } else if diff > 0.0 {
        RegionCase::Right
    } else {
        RegionCase::Left
    };
    let nonreal = z.im.abs() > AXIS_TOL * z.norm().max(1.0);
    let predicates = RegionPredicates {
        imaginary_axis: z.re.abs() <= AXIS_TOL * z.norm().max(1.0),
        right_half: z.re > 0.0,
        left_half: z.re < 0.0,
        hyperbola_bound: diff * diff * z.im * z.im - form * z.re * z.re > 0.0,
        modulus_bound: z.norm_sqr() > radius_sq,
    };
    let hyperbola = match case {
        RegionCase::Axis => BoundStatus::NotApplicable,
        _ if form <= 0.0 => BoundStatus::Vacuous,
        _ => BoundStatus::Informative,
    };
    let located = match case {
        RegionCase::Axis => predicates.imaginary_axis,
        RegionCase::Right => predicates.right_half && predicates.hyperbola_bound,
        RegionCase::Left => predicates.left_half && predicates.hyperbola_bound,
    };
    let verdict = hypothesis.then_some(located && (!nonreal || predicates.modulus_bound));
    RegionReport {
        z,
        relative_residual: rel,
        hypothesis,
        case,
        predicates,
        applicable: RegionApplicable {
            k_zero: case == RegionCase::Axis,
            k_positive: case == RegionCase::Right,
            k_negative: case == RegionCase::Left,
            modulus: nonreal,
        },
        hyperbola,
        verdict,
    }
}

/// Location predicates for a nontrivial zero `z` of `M_{k,l}`.
pub fn whittaker_region_check(k: f64, l: f64, z: Complex64) -> Result<RegionReport> {
    let w = WhittakerParams::new(k, l)?;
    if z.norm() == 0.0 {
        return Err(Error::Precondition("z = 0 is the trivial zero".into()));
    }
    let rel = gate(&w.kummer(), z)?;
    Ok(region(z, 2.0 * k, 4.0 * (l * l - k * k) - 1.0, 4.0 * l * l - 1.0, 2.0 * l - 1.0 >= 0.0, rel))
}

/// Location predicates for a nontrivial zero `z` of `Φ(a, b, ·)`.
pub fn kummer_region_check(a: f64, b: f64, z: Complex64) -> Result<RegionReport> {
    let p = KummerParams::new(a, b)?;
    let rel = gate(&p, z)?;
    Ok(region(z, b - 2.0 * a, 4.0 * a * (b - a) - 2.0 * b, b * (b - 2.0), b >= 2.0, rel))
}

/// One side of the counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleSide {
    pub k: f64,
    pub z: f64,
    /// `|M_{k,l}(z)|`, or for the mirrored side the entire `Φ`-level
    /// residual `|Φ(1/2 + l + k, 1 + 2l, −z)|`.
    pub residual: f64,
    /// The old bound (`Re z > 2k`, resp. `Re z < 2k`) holds.
    pub old_bound_holds: bool,
    /// The corrected half-plane statement holds.
    pub half_plane_holds: bool,
}

/// The family `k = l + 3/2`, `z = 1 + 2l`.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub l: f64,
    pub k: f64,
    pub z: f64,
    /// `Re z > 2k` fails for `k > 0`.
    pub sv_a_violated: bool,
    /// `Re z < 2k` fails for the mirrored `(−k, −z)`.
    pub sv_b_violated: bool,
    /// `Re z > 0` holds.
    pub corrected_b_satisfied: bool,
    /// `Re z < 0` holds for the mirror.
    pub corrected_c_satisfied: bool,
    /// `2l − 1 ≥ 0`; for smaller `l` the corrected statement is outside its
    /// hypothesis and is only observed, not implied.
    pub corrected_hypothesis: bool,
    pub positive: CounterexampleSide,
    pub mirrored: CounterexampleSide,
}

pub fn saff_varga_counterexample(l: f64) -> Result<CounterexampleReport> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("l must be positive, got {l}")));
    }
    let k = l + 1.5;
    let z = 1.0 + 2.0 * l;
    let w = WhittakerParams::new(k, l)?;
    let residual = whittaker_m(&w, Complex64::new(z, 0.0))?.value.norm();
    let mirror = KummerParams::new(0.5 + l + k, 1.0 + 2.0 * l)?;
    let mirror_residual = kummer_phi(&mirror, Complex64::new(-z, 0.0), DEFAULT_TOL)?.norm();
    let positive = CounterexampleSide {
        k,
        z,
        residual,
        old_bound_holds: z > 2.0 * k,
        half_plane_holds: z > 0.0,
    };
    let mirrored = CounterexampleSide {
        k: -k,
        z: -z,
        residual: mirror_residual,
        old_bound_holds: -z < -2.0 * k,
        half_plane_holds: -z < 0.0,
    };
    Ok(CounterexampleReport {
        l,
        k,
        z,
        sv_a_violated: !positive.old_bound_holds,
        sv_b_violated: !mirrored.old_bound_holds,
        corrected_b_satisfied: positive.half_plane_holds,
        corrected_c_satisfied: mirrored.half_plane_holds,
        corrected_hypothesis: 2.0 * l - 1.0 >= 0.0,
        positive,
        mirrored,
    })
}

/// `|Φ(1/2 + l + k, 1 + 2l, −z)|`, the entire-function form of
/// `M_{−k,l}(−z)`, and the series magnitude it is measured against.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SymmetryCheck {
    pub residual: f64,
    pub scale: f64,
}

/// If `z` is a nontrivial zero of `M_{k,l}`, then `−z` is one of `M_{−k,l}`.
pub fn whittaker_symmetry_check(k: f64, l: f64, z: Complex64) -> Result<SymmetryCheck> {
    let w = WhittakerParams::new(k, l)?;
    if z.norm() == 0.0 {
        return Err(Error::Precondition("z = 0 is the trivial zero".into()));
    }
    gate(&w.kummer(), z)?;
    let mirror = WhittakerParams::new(-k, l)?.kummer();
    let v = kummer_phi_detailed(&mirror, -z, DEFAULT_TOL)?;
    Ok(SymmetryCheck {
        residual: v.value.norm(),
        scale: v.magnitude,
    })
}

/// A point of the real root curve `k ↦ z_l(k)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveSample {
    pub l: f64,
    pub k: f64,
    pub z: f64,
    /// `|M_{k,l}(z)|`
    pub residual: f64,
    /// `|e^{−z/2} z^{1/2+l}| Σ|t_k|`, the size of the terms behind `M`.
    pub scale: f64,
}

/// A continued curve, possibly cut short on either side.
#[derive(Clone, Debug, Serialize)]
pub struct RootCurve {
    pub l: f64,
    pub seed: CurveSample,
    /// Sorted by `k`.
    pub samples: Vec<CurveSample>,
    /// Why continuation towards smaller `k` stopped early, if it did.
    pub truncated_low: Option<String>,
    /// Why continuation towards larger `k` stopped early, if it did.
    pub truncated_high: Option<String>,
}

const CURVE_NEWTON_ITER: usize = 50;
const MIN_STEP_FRACTION: f64 = 1.0 / 64.0;

fn curve_sample(l: f64, k: f64, z: f64) -> Result<CurveSample> {
    let w = WhittakerParams::new(k, l)?;
    let zc = Complex64::new(z, 0.0);
    let m = whittaker_m(&w, zc)?.value.norm();
    let series = kummer_phi_detailed(&w.kummer(), zc, DEFAULT_TOL)?.magnitude;
    let prefactor = (-0.5 * z).exp() * z.powf(0.5 + l);
    Ok(CurveSample {
        l,
        k,
        z,
        residual: m,
        scale: prefactor * series,
    })
}

/// Newton on `z ↦ M_{k,l}(z)` along the positive real axis.
fn correct(l: f64, k: f64, guess: f64) -> Option<f64> {
    let w = WhittakerParams::new(k, l).ok()?;
    let mut z = guess;
    for _ in 0..CURVE_NEWTON_ITER {
        if !(z > 0.0) || !z.is_finite() {
            return None;
        }
        let zc = Complex64::new(z, 0.0);
        let m = whittaker_m(&w, zc).ok()?.value.re;
        let dm = whittaker_m_derivative(&w, zc).ok()?.value.re;
        if dm == 0.0 {
            return None;
        }
        let dz = m / dm;
        z -= dz;
        if dz.abs() <= 1e-14 * z.abs().max(1.0) {
            return (z > 0.0).then_some(z);
        }
    }
    None
}

/// Continues from the last accepted samples in direction `dir` until
/// `k_end`. Returns the new samples and a truncation note.
fn continue_curve(
    l: f64,
    start: &[CurveSample],
    k_end: f64,
    step: f64,
    dir: f64,
) -> Result<(Vec<CurveSample>, Option<String>)> {
    let mut path: Vec<CurveSample> = start.to_vec();
    let mut out = vec![];
    let mut h = step;
    loop {
        let last = *path.last().expect("seeded");
        let remaining = (k_end - last.k) * dir;
        if remaining <= 1e-12 * step {
            return Ok((out, None));
        }
        let dk = h.min(remaining);
        let k = last.k + dir * dk;
        let predicted = match path.len() {
            1 => last.z,
            len => {
                let prev = path[len - 2];
                last.z + (last.z - prev.z) / (last.k - prev.k) * (k - last.k)
            }
        };
        let accepted = correct(l, k, predicted)
            .filter(|z| (z - predicted).abs() <= 0.25 * predicted.abs().max(last.z).max(1.0))
            .map(|z| curve_sample(l, k, z))
            .transpose()?
            .filter(|s| s.residual < CURVE_RTOL * s.scale);
        match accepted {
            Some(s) => {
                path.push(s);
                out.push(s);
                h = (2.0 * h).min(step);
            }
            None if h > step * MIN_STEP_FRACTION => h *= 0.5,
            None => {
                return Ok((
                    out,
                    Some(format!(
                        "corrector failed at k = {k} with step {h} after the last good sample (k = {}, z = {})",
                        last.k, last.z
                    )),
                ))
            }
        }
    }
}

/// The real zero `z_l(k)` of `M_{k,l}` through the seed `(l + 3/2, 1 + 2l)`,
/// traced by secant prediction and Newton correction over
/// `[k_min, k_max]`.
pub fn root_curve(l: f64, k_min: f64, k_max: f64, step: f64) -> Result<RootCurve> {
    if !(l > -0.5) {
        return Err(Error::InvalidParameter(format!("l must exceed -1/2, got {l}")));
    }
    let k0 = l + 1.5;
    if !(k_min <= k0 && k0 <= k_max) {
        return Err(Error::InvalidParameter(format!(
            "the seed k = {k0} must lie in [{k_min}, {k_max}]"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let seed = curve_sample(l, k0, 1.0 + 2.0 * l)?;
    if !(seed.residual < CURVE_RTOL * seed.scale) {
        return Err(Error::NonConvergence {
            what: "root curve seed",
            iterations: 0,
            achieved: seed.residual,
        });
    }
    let (high, truncated_high) = continue_curve(l, &[seed], k_max, step, 1.0)?;
    let (low, truncated_low) = continue_curve(l, &[seed], k_min, step, -1.0)?;
    let mut samples: Vec<CurveSample> = low.into_iter().rev().collect();
    samples.push(seed);
    samples.extend(high);
    Ok(RootCurve {
        l,
        seed,
        samples,
        truncated_low,
        truncated_high,
    })
}

/// Numerator `N` and denominator `D` of `tan(ζ/2) = N(ζ)/D(ζ)`, with exact
/// integer coefficients (index = power of `ζ`).
pub fn xi_polynomials(n: usize) -> (Vec<i128>, Vec<i128>) {
    let f = |k: usize| factorial(k as u64);
    let mut num = vec![0i128; 2 * n + 2];
    for l in 0..=(n.max(1) - 1) / 2 {
        if n == 0 {
            break;
        }
        let c = f(2 * n - 2 * l - 1) / (f(2 * l + 1) * f(n - 2 * l - 1));
        let c = c.to_i128().expect("coefficient fits in i128");
        num[2 * l + 1] = if l % 2 == 0 { c } else { -c };
    }
    let mut den = vec![0i128; 2 * n + 2];
    for l in 0..=n / 2 {
        let c = f(2 * n - 2 * l) / (f(2 * l) * f(n - 2 * l));
        let c = c.to_i128().expect("coefficient fits in i128");
        den[2 * l] = if l % 2 == 0 { c } else { -c };
    }
    while num.last() == Some(&0) {
        num.pop();
    }
    while den.last() == Some(&0) {
        den.pop();
    }
    (num, den)
}

fn eval_int(c: &[i128], x: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for &ck in c.iter().rev() {
        d = d * x + v;
        v = v * x + ck as f64;
    }
    (v, d)
}

/// `g(ζ) = D(ζ) sin(ζ/2) − N(ζ) cos(ζ/2)` and its derivative.
fn xi_g(num: &[i128], den: &[i128], x: f64) -> (f64, f64) {
    let (nv, nd) = eval_int(num, x);
    let (dv, dd) = eval_int(den, x);
    let (s, c) = (0.5 * x).sin_cos();
    let g = dv * s - nv * c;
    let dg = dd * s + 0.5 * dv * c - nd * c + 0.5 * nv * s;
    (g, dg)
}

const XI_INSET: f64 = 1e-9;
const XI_SCAN: usize = 256;

/// The first `count` positive elements of `Ξ_n`, the solutions of
/// `tan(ζ/2) = N(ζ)/D(ζ)`.
///
/// Each branch `((2j − 1)π, (2j + 1)π)` of the tangent, inset by `1e−9`, is
/// scanned for sign changes of `D sin(ζ/2) − N cos(ζ/2)`; brackets are
/// refined by bisection and polished by Newton to `1e−12`. Candidates where
/// `D` vanishes together with `cos(ζ/2)` are discarded by a residual check
/// on `Φ(n + 1, 2n + 2, iζ)`.
pub fn xi_set(n: usize, count: usize) -> Result<Vec<f64>> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidParameter("n and count must be at least 1".into()));
    }
    let (num, den) = xi_polynomials(n);
    let g = |x: f64| xi_g(&num, &den, x);
    let mut roots = vec![];
    let max_branches = count + 4 * n + 64;
    for j in 0..max_branches {
        let lo = if j == 0 { 0.25 } else { (2 * j - 1) as f64 * PI + XI_INSET };
        let hi = (2 * j + 1) as f64 * PI - XI_INSET;
        let mut prev_x = lo;
        let mut prev_g = g(lo).0;
        for i in 1..=XI_SCAN {
            let x = lo + (hi - lo) * i as f64 / XI_SCAN as f64;
            let gx = g(x).0;
            if prev_g == 0.0 || prev_g.signum() != gx.signum() {
                let root = refine(&g, prev_x, x, prev_g);
                if xi_crosscheck(n, root)? < 1e-6 {
                    roots.push(root);
                    if roots.len() == count {
                        return Ok(roots);
                    }
                }
            }
            prev_x = x;
            prev_g = gx;
        }
    }
    Err(Error::NonConvergence {
        what: "Xi_n branch scan",
        iterations: max_branches,
        achieved: roots.len() as f64,
    })
}

fn refine(g: &impl Fn(f64) -> (f64, f64), mut a: f64, mut b: f64, ga: f64) -> f64 {
    let mut sa = ga.signum();
    if ga == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = g(mid).0;
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == sa {
            a = mid;
            sa = gm.signum();
        } else {
            b = mid;
        }
        if b - a < 1e-9 * b.abs().max(1.0) {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..20 {
        let (v, d) = g(x);
        if d == 0.0 {
            break;
        }
        let step = v / d;
        let next = x - step;
        if !(a - 1e-6..=b + 1e-6).contains(&next) {
            break;
        }
        x = next;
        if step.abs() <= 1e-12 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// `|Φ(n + 1, 2n + 2, iζ)|`, zero exactly when `iζ` is a zero of
/// `M_{0, n+1/2}`.
pub fn xi_crosscheck(n: usize, zeta: f64) -> Result<f64> {
    let p = KummerParams::new((n + 1) as f64, (2 * n + 2) as f64)?;
    Ok(kummer_phi(&p, Complex64::new(0.0, zeta), DEFAULT_TOL)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ZETA1: f64 = 8.986_818_916_177_188;

    #[test]
    fn whittaker_region_examples() {
        let r = whittaker_region_check(0.0, 1.5, c(0.0, ZETA1)).unwrap();
        assert!(r.predicates.imaginary_axis && r.predicates.modulus_bound);
        assert_eq!(r.case, RegionCase::Axis);
        assert_eq!(r.verdict, Some(true));

        let r = whittaker_region_check(2.5, 1.0, c(3.0, 0.0)).unwrap();
        assert!(r.predicates.right_half && r.predicates.hyperbola_bound);
        assert_eq!(r.hyperbola, BoundStatus::Vacuous);
        assert_eq!(r.verdict, Some(true));

        let r = whittaker_region_check(-2.5, 1.0, c(-3.0, 0.0)).unwrap();
        assert!(r.predicates.left_half);
        assert_eq!(r.case, RegionCase::Left);

        assert!(matches!(
            whittaker_region_check(2.5, 1.0, c(2.0, 0.0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn region_without_hypothesis_gives_no_verdict() {
        let r = whittaker_region_check(1.75, 0.25, c(1.5, 0.0)).unwrap();
        assert!(!r.hypothesis);
        assert_eq!(r.verdict, None);
    }

    #[test]
    fn kummer_region_examples() {
        let r = kummer_region_check(1.0, 2.0, c(0.0, 2.0 * PI)).unwrap();
        assert!(r.predicates.imaginary_axis);
        assert_eq!(r.case, RegionCase::Axis);
        let r = kummer_region_check(2.0, 4.0, c(0.0, -ZETA1)).unwrap();
        assert!(r.predicates.imaginary_axis);
        assert_eq!(r.verdict, Some(true));
    }

    #[test]
    fn counterexample_family() {
        for (l, k, z) in [(1.0, 2.5, 3.0), (0.5, 2.0, 2.0), (0.25, 1.75, 1.5), (2.0, 3.5, 5.0)] {
            let r = saff_varga_counterexample(l).unwrap();
            assert_eq!((r.k, r.z), (k, z));
            assert!(r.sv_a_violated && r.sv_b_violated);
            assert!(r.corrected_b_satisfied && r.corrected_c_satisfied);
            assert!(r.positive.residual < 1e-10);
            assert!(r.mirrored.residual < 1e-10);
        }
        assert!(saff_varga_counterexample(0.0).is_err());
    }

    #[test]
    fn symmetry() {
        let s = whittaker_symmetry_check(2.5, 1.0, c(3.0, 0.0)).unwrap();
        assert!(s.residual < 1e-9 * s.scale);
        let s = whittaker_symmetry_check(0.0, 1.5, c(0.0, ZETA1)).unwrap();
        assert!(s.residual < 1e-9 * s.scale);
        assert!(whittaker_symmetry_check(2.5, 1.0, c(1.0, 1.0)).is_err());
    }

    #[test]
    fn curve_seeds() {
        let curve = root_curve(1.0, 2.0, 3.0, 0.1).unwrap();
        let seed = curve.samples.iter().find(|s| s.k == 2.5).unwrap();
        assert_eq!(seed.z, 3.0);
        let curve = root_curve(0.0, 1.5, 2.0, 0.1).unwrap();
        assert!((curve.seed.z - 1.0).abs() < 1e-12);
        assert!(root_curve(1.0, 3.0, 4.0, 0.1).is_err());
    }

    #[test]
    fn curve_is_positive_and_decreasing() {
        let curve = root_curve(0.5, 1.1, 12.0, 0.1).unwrap();
        assert!(curve.truncated_low.is_none() && curve.truncated_high.is_none());
        assert!(curve.samples.windows(2).all(|w| w[0].k < w[1].k && w[0].z > w[1].z));
        assert!(curve.samples.iter().all(|s| s.z > 0.0 && s.residual < CURVE_RTOL * s.scale));
    }

    #[test]
    fn xi_polynomials_small_n() {
        assert_eq!(xi_polynomials(1), (vec![0, 1], vec![2]));
        assert_eq!(xi_polynomials(2), (vec![0, 6], vec![12, 0, -1]));
    }

    #[test]
    fn xi_first_root() {
        let xi = xi_set(1, 3).unwrap();
        assert!((xi[0] - ZETA1).abs() < 1e-9);
        for z in xi {
            assert!(xi_crosscheck(1, z).unwrap() < 1e-8);
            // odd symmetry of both sides
            let (num, den) = xi_polynomials(1);
            assert!(xi_g(&num, &den, -z).0.abs() < 1e-9);
        }
        assert!(xi_crosscheck(1, 5.0).unwrap() > 0.1);
        assert_eq!(xi_crosscheck(3, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn xi_dual_consistency() {
        for n in 1..=3 {
            let xi = xi_set(n, 2).unwrap();
            for z in xi {
                assert!(xi_crosscheck(n, z).unwrap() < 1e-8, "n = {n}, zeta = {z}");
            }
        }
    }
}
