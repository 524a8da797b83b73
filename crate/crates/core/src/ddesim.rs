//! Time-domain simulation of
//!
//! ```text
//! y^{(n)}(t) + Σ_{k<n} a_k y^{(k)}(t) + Σ_{k≤m} α_k y^{(k)}(t − τ) = 0
//! ```
//!
//! for retarded equations (`m < n`), by the method of steps with classical
//! Runge–Kutta and cubic Hermite dense output of the stored past.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quasipoly::Quasipolynomial;

/// Smallest admissible ratio `τ/dt`.
pub const MIN_STEPS_PER_DELAY: f64 = 50.0;
/// Smallest admissible ratio `horizon/τ`.
pub const MIN_DELAYS_PER_HORIZON: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Initial function on `[−τ, 0]` as polynomial coefficients in `t`
    /// (index = power).
    pub history: Vec<f64>,
    pub horizon: f64,
    pub dt: f64,
    /// Record every `record_stride`-th step.
    pub record_stride: usize,
}

impl SimConfig {
    pub fn new(history: Vec<f64>, horizon: f64, dt: f64) -> Self {
        Self {
            history,
            horizon,
            dt,
            record_stride: 1,
        }
    }

    fn validate(&self, tau: f64) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > tau / MIN_STEPS_PER_DELAY * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "dt = {} exceeds tau/{MIN_STEPS_PER_DELAY} = {}",
                self.dt,
                tau / MIN_STEPS_PER_DELAY
            )));
        }
        if !(self.horizon >= MIN_DELAYS_PER_HORIZON * tau * (1.0 - 1e-12)) || !self.horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon = {} is shorter than {MIN_DELAYS_PER_HORIZON} tau = {}",
                self.horizon,
                MIN_DELAYS_PER_HORIZON * tau
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be at least 1".into()));
        }
        if self.history.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("history coefficients must be finite".into()));
        }
        Ok(())
    }
}

/// Recorded solution: `states[i][k] = y^{(k)}(times[i])` for `k < n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub n: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn y(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s[0])
    }

    /// Column names `t, y, y', y'', ...`.
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string(), "y".to_string()];
        h.extend((1..self.n).map(|k| format!("y{}", "'".repeat(k))));
        h
    }

    /// One row per recorded time: `t` followed by the state.
    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.times.iter().zip(&self.states).map(|(t, s)| {
            let mut row = Vec::with_capacity(s.len() + 1);
            row.push(*t);
            row.extend_from_slice(s);
            row
        })
    }
}

/// `k`-th derivative of `Σ c_j t^j`.
fn poly_derivative(c: &[f64], t: f64, k: usize) -> f64 {
    let mut acc = 0.0;
    for j in (k..c.len()).rev() {
        let falling: f64 = ((j - k + 1)..=j).map(|i| i as f64).product();
        acc = acc * t + c[j] * falling;
    }
    acc
}

struct Past<'a> {
    history: &'a [f64],
    dt: f64,
    /// `x(t_i)` and `x'(t_i)` at grid points `t_i = i·dt`.
    x: Vec<Vec<f64>>,
    dx: Vec<Vec<f64>>,
}

impl Past<'_> {
    /// `y^{(k)}(s)` for `s` in the past.
    fn eval(&self, s: f64, k: usize) -> f64 {
        if s <= 0.0 {
            return poly_derivative(self.history, s, k);
        }
        let i = ((s / self.dt).floor() as usize).min(self.x.len() - 2);
        let h = self.dt;
        let u = (s - i as f64 * h) / h;
        let (p0, p1) = (self.x[i][k], self.x[i + 1][k]);
        let (m0, m1) = (self.dx[i][k] * h, self.dx[i + 1][k] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * p0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * p1
            + (u3 - u2) * m1
    }
}

fn rhs(q: &Quasipolynomial, past: &Past<'_>, t: f64, x: &[f64]) -> Vec<f64> {
    let n = q.n();
    let mut dx = Vec::with_capacity(n);
    dx.extend_from_slice(&x[1..]);
    let undelayed: f64 = q.a().iter().zip(x).map(|(a, y)| a * y).sum();
    let delayed: f64 = q
        .alpha()
        .iter()
        .enumerate()
        .map(|(k, al)| al * past.eval(t - q.tau(), k))
        .sum();
    dx.push(-undelayed - delayed);
    dx
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Integrates the DDE with characteristic function `q` from the polynomial
/// history in `cfg`.
pub fn simulate(q: &Quasipolynomial, cfg: &SimConfig) -> Result<Trajectory> {
    if !q.is_retarded() {
        return Err(Error::Unsupported(
            "neutral equations (m = n) are not simulated".into(),
        ));
    }
    cfg.validate(q.tau())?;
    let n = q.n();
    let dt = cfg.dt;
    let steps = (cfg.horizon / dt).round() as usize;
    let x0: Vec<f64> = (0..n).map(|k| poly_derivative(&cfg.history, 0.0, k)).collect();
    let mut past = Past {
        history: &cfg.history,
        dt,
        x: Vec::with_capacity(steps + 1),
        dx: Vec::with_capacity(steps + 1),
    };
    let dx0 = rhs(q, &past, 0.0, &x0);
    past.x.push(x0.clone());
    past.dx.push(dx0);

    let mut times = vec![0.0];
    let mut states = vec![x0];
    for i in 0..steps {
        let t = i as f64 * dt;
        let x = past.x[i].clone();
        let k1 = past.dx[i].clone();
        let k2 = rhs(q, &past, t + 0.5 * dt, &axpy(&x, 0.5 * dt, &k1));
        let k3 = rhs(q, &past, t + 0.5 * dt, &axpy(&x, 0.5 * dt, &k2));
        let k4 = rhs(q, &past, t + dt, &axpy(&x, dt, &k3));
        let next: Vec<f64> = (0..n)
            .map(|j| x[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
            .collect();
        let t_next = (i + 1) as f64 * dt;
        let d_next = rhs(q, &past, t_next, &next);
        past.x.push(next);
        past.dx.push(d_next);
        if (i + 1) % cfg.record_stride == 0 {
            times.push(t_next);
            states.push(past.x[i + 1].clone());
        }
    }
    Ok(Trajectory { n, times, states })
}

/// Envelope model fitted to `ln|y|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeModel {
    /// `ln|y| ≈ c + r t`
    Exponential,
    /// `ln|y| ≈ c + r t + p ln t`, the envelope `t^p e^{rt}` of a multiple
    /// dominant root.
    PowerExponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayEstimate {
    /// Fitted exponential rate, `−∞` on underflow.
    pub rate: f64,
    /// Fitted power of `t` (zero for [`EnvelopeModel::Exponential`]).
    pub power: f64,
    pub underflow: bool,
    /// Number of points in the fit.
    pub points: usize,
    /// `true` when local maxima of `|y|` were used, `false` when there were
    /// too few and all samples were.
    pub peaks: bool,
    pub model: EnvelopeModel,
}

const MIN_PEAKS: usize = 4;
const UNDERFLOW: f64 = 1e-300;

/// Least-squares fit of `v ≈ Σ β_j φ_j`, by normal equations.
fn least_squares(rows: &[Vec<f64>], v: &[f64]) -> Option<Vec<f64>> {
    let p = rows[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (r, &y) in rows.iter().zip(v) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += r[i] * r[j];
            }
            a[i][p] += r[i] * y;
        }
    }
    for c in 0..p {
        let piv = (c..p).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        for r in 0..p {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=p {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    Some((0..p).map(|i| a[i][p] / a[i][i]).collect())
}

/// Exponential rate of the envelope of `|y|` over the last
/// `1 − skip_fraction` of the trajectory, fitted through the local maxima
/// of `|y|` (or all samples when fewer than four maxima exist).
pub fn decay_rate_estimate(tr: &Trajectory, skip_fraction: f64) -> Result<DecayEstimate> {
    decay_rate_estimate_with(tr, skip_fraction, EnvelopeModel::Exponential)
}

pub fn decay_rate_estimate_with(
    tr: &Trajectory,
    skip_fraction: f64,
    model: EnvelopeModel,
) -> Result<DecayEstimate> {
    if !(0.0..1.0).contains(&skip_fraction) {
        return Err(Error::InvalidParameter(format!(
            "skip_fraction must lie in [0, 1), got {skip_fraction}"
        )));
    }
    let len = tr.times.len();
    if len < 3 {
        return Err(Error::InvalidParameter("trajectory too short".into()));
    }
    let t_end = tr.times[len - 1];
    let t_start = tr.times[0] + skip_fraction * (t_end - tr.times[0]);
    let window: Vec<(f64, f64)> = tr
        .times
        .iter()
        .zip(tr.y())
        .filter(|(t, _)| **t >= t_start)
        .map(|(t, y)| (*t, y.abs()))
        .collect();
    let underflow = DecayEstimate {
        rate: f64::NEG_INFINITY,
        power: 0.0,
        underflow: true,
        points: 0,
        peaks: false,
        model,
    };
    if window.iter().all(|(_, y)| *y < UNDERFLOW) {
        return Ok(underflow);
    }
    let peaks: Vec<(f64, f64)> = window
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| w[1])
        .collect();
    let (points, used_peaks) = if peaks.len() >= MIN_PEAKS {
        (peaks, true)
    } else {
        (window, false)
    };
    let points: Vec<(f64, f64)> = points.into_iter().filter(|(_, y)| *y >= UNDERFLOW).collect();
    if points.len() < 3 {
        return Ok(underflow);
    }
    let logs: Vec<f64> = points.iter().map(|(_, y)| y.ln()).collect();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|(t, _)| match model {
            EnvelopeModel::Exponential => vec![1.0, *t],
            EnvelopeModel::PowerExponential => vec![1.0, *t, t.max(f64::MIN_POSITIVE).ln()],
        })
        .collect();
    let beta = least_squares(&rows, &logs).ok_or(Error::NonConvergence {
        what: "envelope least squares",
        iterations: 0,
        achieved: f64::NAN,
    })?;
    Ok(DecayEstimate {
        rate: beta[1],
        power: beta.get(2).copied().unwrap_or(0.0),
        underflow: false,
        points: points.len(),
        peaks: used_peaks,
        model,
    })
}
