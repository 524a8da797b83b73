//! Argument-principle zero counting and zero location in rectangles, for any
//! function implementing [`Analytic`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An analytic function with analytic derivatives of every order.
pub trait Analytic: Sync {
    /// `order`-th derivative at `s` (`order = 0` is the value).
    fn derivative(&self, s: Complex64, order: usize) -> Result<Complex64>;

    fn value(&self, s: Complex64) -> Result<Complex64> {
        self.derivative(s, 0)
    }

    /// Magnitude of the terms that make up `f(s)`. Rounding noise in a
    /// computed value is a small multiple of `ε·scale`.
    fn scale(&self, s: Complex64) -> f64;

    /// Upper bound on the multiplicity of any zero, when one is known.
    fn multiplicity_cap(&self) -> Option<usize> {
        None
    }

    /// `(f(s), f'(s), scale(s))`, all divided by one common positive factor
    /// so that they stay finite where `f` itself overflows. Phases, ratios
    /// and the boundary test are unaffected by the factor.
    fn scaled_sample(&self, s: Complex64) -> Result<(Complex64, Complex64, f64)> {
        Ok((self.value(s)?, self.derivative(s, 1)?, self.scale(s)))
    }
}

/// Closed axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidParameter(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Square of half-width `r` around `c`.
    pub fn around(c: Complex64, r: f64) -> Self {
        Self {
            re_min: c.re - r,
            re_max: c.re + r,
            im_min: c.im - r,
            im_max: c.im + r,
        }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn inflate(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// Distance from an interior point to the nearest edge.
    pub fn inner_distance(&self, z: Complex64) -> f64 {
        (z.re - self.re_min)
            .min(self.re_max - z.re)
            .min(z.im - self.im_min)
            .min(self.im_max - z.im)
    }

    /// Four children split at fractions `fx`, `fy` of the width and height.
    pub fn quadrisect(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let x = self.re_min + fx * self.width();
        let y = self.im_min + fy * self.height();
        [
            Rect { re_max: x, im_max: y, ..*self },
            Rect { re_min: x, im_max: y, ..*self },
            Rect { re_max: x, im_min: y, ..*self },
            Rect { re_min: x, im_min: y, ..*self },
        ]
    }

    /// Counter-clockwise corners starting at the lower left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// `|f|` below this multiple of `f.scale()` on the contour counts as a zero
/// on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Absolute inflation applied to a rectangle whose boundary carries a zero.
pub const INFLATION_STEP: f64 = 1e-3;
pub const MAX_INFLATIONS: usize = 5;
/// Relative threshold of the derivative test for multiplicities.
pub const MULT_TOL: f64 = 1e-6;

const EDGE_PIECES: usize = 8;
const MAX_BISECTIONS: usize = 60;
const NEWTON_MAX_ITER: usize = 100;
const MAX_SPLIT_DEPTH: usize = 40;
const SPLIT_FRACTIONS: [(f64, f64); 5] = [
    (0.5137, 0.4729),
    (0.4611, 0.5383),
    (0.5719, 0.4211),
    (0.4297, 0.6071),
    (0.6337, 0.3659),
];

#[derive(Clone, Copy)]
struct Sample {
    s: Complex64,
    f: Complex64,
    log_slope: f64,
}

fn sample<F: Analytic + ?Sized>(f: &F, s: Complex64) -> Result<Sample> {
    let (v, d, scale) = f.scaled_sample(s)?;
    if !(v.norm() > BOUNDARY_TOL * scale) {
        return Err(Error::BoundaryZero {
            re: s.re,
            im: s.im,
            retries: 0,
        });
    }
    if !(v.is_finite() && d.is_finite()) {
        return Err(Error::Overflow { re: s.re, im: s.im });
    }
    Ok(Sample {
        s,
        f: v,
        log_slope: d.norm() / v.norm(),
    })
}

/// Phase increment of `f` from `a` to `b`, refining until consecutive samples
/// differ by less than π/4 in phase and the logarithmic derivative cannot
/// turn the phase by a full radian between them.
fn segment_phase<F: Analytic + ?Sized>(
    f: &F,
    a: Sample,
    b: Sample,
    depth: usize,
    samples: &mut usize,
) -> Result<f64> {
    let h = (b.s - a.s).norm();
    let dphi = (b.f / a.f).arg();
    if dphi.abs() < FRAC_PI_4 && h * a.log_slope.max(b.log_slope) < 1.0 {
        return Ok(dphi);
    }
    if depth >= MAX_BISECTIONS {
        if dphi.abs() < FRAC_PI_2 {
            return Ok(dphi);
        }
        let mid = 0.5 * (a.s + b.s);
        return Err(Error::PhaseJump {
            jump: dphi,
            re: mid.re,
            im: mid.im,
        });
    }
    let mid = sample(f, 0.5 * (a.s + b.s))?;
    *samples += 1;
    Ok(segment_phase(f, a, mid, depth + 1, samples)? + segment_phase(f, mid, b, depth + 1, samples)?)
}

/// Winding number of `f` around `r`, as a float, and the samples used.
fn winding<F: Analytic + ?Sized>(f: &F, r: &Rect) -> Result<(f64, usize)> {
    let corners = r.corners();
    let mut total = 0.0;
    let mut samples = 0usize;
    for e in 0..4 {
        let (p0, p1) = (corners[e], corners[(e + 1) % 4]);
        let mut prev = sample(f, p0)?;
        samples += 1;
        for i in 1..=EDGE_PIECES {
            let s = p0 + (p1 - p0) * (i as f64 / EDGE_PIECES as f64);
            let next = sample(f, s)?;
            samples += 1;
            total += segment_phase(f, prev, next, 0, &mut samples)?;
            prev = next;
        }
    }
    Ok((total / TAU, samples))
}

fn rounded_count(w: f64, r: &Rect) -> Result<usize> {
    let k = w.round();
    if (w - k).abs() > 0.25 || k < 0.0 {
        let c = r.center();
        return Err(Error::PhaseJump {
            jump: w * TAU,
            re: c.re,
            im: c.im,
        });
    }
    Ok(k as usize)
}

/// Count on exactly this rectangle, no inflation.
fn count_exact<F: Analytic + ?Sized>(f: &F, r: &Rect) -> Result<usize> {
    let (w, _) = winding(f, r)?;
    rounded_count(w, r)
}

/// Outcome of a zero count.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZeroCount {
    pub count: usize,
    /// The rectangle actually integrated over (inflated if a boundary zero
    /// was hit).
    pub rect: Rect,
    pub inflations: usize,
    pub samples: usize,
    pub winding: f64,
}

/// Number of zeros of `f` inside `r`, with multiplicity.
///
/// When a zero sits on (or numerically at) the boundary, the rectangle is
/// inflated by [`INFLATION_STEP`] and the count repeated, at most
/// [`MAX_INFLATIONS`] times. The rectangle actually used is reported.
pub fn count_zeros<F: Analytic + ?Sized>(f: &F, r: &Rect) -> Result<ZeroCount> {
    let mut last_err = None;
    for attempt in 0..=MAX_INFLATIONS {
        let rect = r.inflate(attempt as f64 * INFLATION_STEP);
        match winding(f, &rect) {
            Ok((w, samples)) => match rounded_count(w, &rect) {
                Ok(count) => {
                    return Ok(ZeroCount {
                        count,
                        rect,
                        inflations: attempt,
                        samples,
                        winding: w,
                    })
                }
                Err(e) => last_err = Some(e),
            },
            Err(e @ (Error::BoundaryZero { .. } | Error::PhaseJump { .. })) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(match last_err {
        Some(Error::BoundaryZero { re, im, .. }) => Error::BoundaryZero {
            re,
            im,
            retries: MAX_INFLATIONS,
        },
        Some(e) => e,
        None => unreachable!("at least one attempt is made"),
    })
}

/// How a root record was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    /// Simple zero isolated by counting and polished by Newton's method.
    Newton,
    /// Multiple zero (or tight cluster) whose multiplicity was fixed by a
    /// local winding number.
    Contour,
    /// Location known in closed form.
    Analytic,
}

/// A located zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootRecord {
    pub location: Complex64,
    pub multiplicity: usize,
    /// `|f^{(j)}(location)|` for `j = 0..=multiplicity`.
    pub residuals: Vec<f64>,
    pub scale: f64,
    pub method: RootMethod,
}

/// Zeros found in a rectangle plus the sub-rectangles that could not be
/// resolved.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSearch {
    pub roots: Vec<RootRecord>,
    pub unresolved: Vec<(Rect, usize)>,
    pub count: ZeroCount,
}

impl ZeroSearch {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

fn factorial_f64(j: usize) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

/// Threshold of the derivative test at `z` for order `j`.
fn derivative_threshold(z: Complex64, j: usize, scale: f64) -> f64 {
    MULT_TOL * factorial_f64(j) * z.norm().max(1.0).powi(-(j as i32)) * scale
}

/// Smallest `j` with `|f^{(j)}(z)|` above the multiplicity threshold, capped
/// by the function's multiplicity bound.
pub fn derivative_multiplicity<F: Analytic + ?Sized>(f: &F, z: Complex64) -> Result<usize> {
    let scale = f.scale(z);
    let cap = f.multiplicity_cap().unwrap_or(64);
    for j in 0..cap {
        if f.derivative(z, j)?.norm() > derivative_threshold(z, j, scale) {
            return Ok(j);
        }
    }
    Ok(cap)
}

/// Multiplicity of `z` as a zero of `f`: the derivative test, arbitrated by
/// the winding number on a square of half-width `probe` when the two
/// disagree.
pub fn multiplicity_at<F: Analytic + ?Sized>(f: &F, z: Complex64, probe: f64) -> Result<usize> {
    let by_derivatives = derivative_multiplicity(f, z)?;
    match count_exact(f, &Rect::around(z, probe)) {
        Ok(by_winding) if by_winding != by_derivatives => Ok(by_winding),
        _ => Ok(by_derivatives),
    }
}

/// Newton's method on `f^{(order)}` started at `start`. Gives up when the
/// iterate leaves `fence` or after [`NEWTON_MAX_ITER`] steps.
fn newton<F: Analytic + ?Sized>(f: &F, order: usize, start: Complex64, fence: &Rect) -> Result<Option<Complex64>> {
    let mut z = start;
    let max_step = fence.diameter();
    let mut last_step = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let v = f.derivative(z, order)?;
        if v.norm() == 0.0 {
            return Ok(Some(z));
        }
        let d = f.derivative(z, order + 1)?;
        if d.norm() == 0.0 || !d.norm().is_finite() {
            return Ok(None);
        }
        let mut step = v / d;
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        z -= step;
        if !fence.contains(z) {
            return Ok(None);
        }
        last_step = step.norm();
        if last_step <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            return Ok(Some(z));
        }
    }
    Ok((last_step < 1e-9 * z.norm().max(1.0)).then_some(z))
}

/// Tries to explain all `count` zeros in `r` as one zero of that
/// multiplicity (or a cluster too tight to separate).
fn try_cluster<F: Analytic + ?Sized>(f: &F, r: &Rect, count: usize, tol: f64) -> Result<Option<RootRecord>> {
    let fence = r.inflate(0.25 * r.diameter());
    let z = match newton(f, count - 1, r.center(), &fence)? {
        Some(z) if r.contains(z) => z,
        _ => return Ok(None),
    };
    let scale = f.scale(z);
    let residuals = (0..=count)
        .map(|j| f.derivative(z, j).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?;
    if residuals[0] > tol * scale {
        return Ok(None);
    }
    if count == 1 {
        return Ok(Some(RootRecord {
            location: z,
            multiplicity: 1,
            residuals,
            scale,
            method: RootMethod::Newton,
        }));
    }
    if (1..count).any(|j| residuals[j] > derivative_threshold(z, j, scale)) {
        return Ok(None);
    }
    // every zero of r must lie in a small square around z
    let probe = (0.25 * r.width().min(r.height())).min(0.9 * r.inner_distance(z));
    if probe > 1e-10 * z.norm().max(1.0) {
        match count_exact(f, &Rect::around(z, probe)) {
            Ok(local) if local == count => {}
            Ok(_) => return Ok(None),
            Err(_) => {}
        }
    }
    Ok(Some(RootRecord {
        location: z,
        multiplicity: count,
        residuals,
        scale,
        method: RootMethod::Contour,
    }))
}

fn split<F: Analytic + ?Sized>(f: &F, r: &Rect, count: usize) -> Option<Vec<(Rect, usize)>> {
    for &(fx, fy) in &SPLIT_FRACTIONS {
        let children = r.quadrisect(fx, fy);
        let counts: Vec<Result<usize>> = children.iter().map(|c| count_exact(f, c)).collect();
        if counts.iter().all(Result::is_ok) {
            let counts: Vec<usize> = counts.into_iter().map(Result::unwrap).collect();
            if counts.iter().sum::<usize>() == count {
                return Some(children.into_iter().zip(counts).filter(|&(_, c)| c > 0).collect());
            }
        }
    }
    None
}

fn resolve<F: Analytic + ?Sized>(
    f: &F,
    r: Rect,
    count: usize,
    tol: f64,
    depth: usize,
) -> Result<(Vec<RootRecord>, Vec<(Rect, usize)>)> {
    if count == 0 {
        return Ok((vec![], vec![]));
    }
    if let Some(rec) = try_cluster(f, &r, count, tol)? {
        return Ok((vec![rec], vec![]));
    }
    let tiny = r.diameter() < 1e-12 * r.center().norm().max(1.0);
    if depth >= MAX_SPLIT_DEPTH || tiny {
        return Ok((vec![], vec![(r, count)]));
    }
    let Some(children) = split(f, &r, count) else {
        return Ok((vec![], vec![(r, count)]));
    };
    let parts: Vec<Result<(Vec<RootRecord>, Vec<(Rect, usize)>)>> = {
        use rayon::prelude::*;
        children
            .into_par_iter()
            .map(|(c, k)| resolve(f, c, k, tol, depth + 1))
            .collect()
    };
    let mut roots = vec![];
    let mut unresolved = vec![];
    for p in parts {
        let (r, u) = p?;
        roots.extend(r);
        unresolved.extend(u);
    }
    Ok((roots, unresolved))
}

fn location_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// All zeros of `f` in `r`.
///
/// The rectangle is quadrisected until each piece holds a single zero or a
/// single cluster, which is then located by Newton's method on
/// `f^{(c−1)}` (for a piece of count `c`) and accepted only when
/// `|f| ≤ tol·scale`, the lower derivatives pass the multiplicity test and a
/// local winding number confirms the cluster. Pieces where that fails are
/// returned as unresolved. Results are sorted by location.
pub fn find_zeros<F: Analytic + ?Sized>(f: &F, r: &Rect, tol: f64) -> Result<ZeroSearch> {
    let count = count_zeros(f, r)?;
    let (mut roots, mut unresolved) = resolve(f, count.rect, count.count, tol, 0)?;
    roots.sort_by(|a, b| location_order(&a.location, &b.location));
    unresolved.sort_by(|a, b| location_order(&a.0.center(), &b.0.center()));
    Ok(ZeroSearch {
        roots,
        unresolved,
        count,
    })
}

/// Zeros of a polynomial `Σ c_k z^k` with float coefficients (used as an
/// [`Analytic`] in tests and by callers that need one).
#[derive(Clone, Debug)]
pub struct FloatPolynomial(pub Vec<f64>);

impl Analytic for FloatPolynomial {
    fn derivative(&self, s: Complex64, order: usize) -> Result<Complex64> {
        Ok(crate::polycore::horner_derivative(&self.0, s, order))
    }

    fn scale(&self, s: Complex64) -> f64 {
        let r = s.norm();
        self.0.iter().rev().fold(0.0, |acc, c| acc * r + c.abs()).max(f64::MIN_POSITIVE)
    }

    fn multiplicity_cap(&self) -> Option<usize> {
        Some(self.0.len().saturating_sub(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn counts_polynomial_zeros() {
        // (z − 1)(z + 2)(z − i)
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)] {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let p = ComplexPoly(coeffs);
        let r = Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap();
        assert_eq!(count_zeros(&p, &r).unwrap().count, 3);
        let r = Rect::new(0.5, 3.0, -0.5, 0.5).unwrap();
        assert_eq!(count_zeros(&p, &r).unwrap().count, 1);
        let found = find_zeros(&p, &Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 1e-10).unwrap();
        assert_eq!(found.roots.len(), 3);
        assert!(found.unresolved.is_empty());
        assert!((found.roots[0].location - c(-2.0, 0.0)).norm() < 1e-12);
    }

    struct ComplexPoly(Vec<Complex64>);

    impl Analytic for ComplexPoly {
        fn derivative(&self, s: Complex64, order: usize) -> Result<Complex64> {
            let mut acc = c(0.0, 0.0);
            for k in (order..self.0.len()).rev() {
                let falling: f64 = ((k - order + 1)..=k).map(|i| i as f64).product();
                acc = acc * s + self.0[k] * falling;
            }
            Ok(acc)
        }
        fn scale(&self, s: Complex64) -> f64 {
            self.0.iter().rev().fold(0.0, |acc, c| acc * s.norm() + c.norm())
        }
    }

    #[test]
    fn boundary_zero_triggers_inflation() {
        // zero at z = 1 lies on the right edge
        let p = FloatPolynomial(vec![-1.0, 1.0]);
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let cnt = count_zeros(&p, &r).unwrap();
        assert_eq!(cnt.count, 1);
        assert!(cnt.inflations >= 1);
    }

    #[test]
    fn multiple_root_is_a_single_record() {
        // (z − 0.3)^3 (z + 1)
        let p = FloatPolynomial(vec![-0.027, 0.243, -0.63, 0.1, 1.0]);
        let search = find_zeros(&p, &Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap(), 1e-10).unwrap();
        assert_eq!(search.count.count, 4);
        assert_eq!(search.total_multiplicity(), 4);
        let triple = search.roots.iter().find(|r| r.multiplicity == 3).unwrap();
        assert!((triple.location - c(0.3, 0.0)).norm() < 1e-6);
        assert_eq!(triple.residuals.len(), 4);
    }

    #[test]
    fn quadrisection_is_additive() {
        let p = FloatPolynomial(vec![2.0, -1.0, 0.5, 3.0, 1.0]);
        let r = Rect::new(-4.0, 4.0, -4.0, 4.0).unwrap();
        let total = count_zeros(&p, &r).unwrap().count;
        let parts: usize = r
            .quadrisect(0.37, 0.61)
            .iter()
            .map(|c| count_zeros(&p, c).unwrap().count)
            .sum();
        assert_eq!(total, 4);
        assert_eq!(parts, total);
    }

    #[test]
    fn degenerate_rect_is_rejected() {
        assert!(Rect::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.0, 2.0, -1.0).is_err());
    }
}
