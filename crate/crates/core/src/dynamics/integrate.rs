use thiserror::Error;

use crate::system::{casimir, hamiltonian, vector_field, LVSystem};

pub const DEFAULT_CEILING: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("step and span must be positive and finite (h={h}, span={span})")]
    BadStep { h: f64, span: f64 },
    #[error("blow-up after t={t_last}: a component exceeded the ceiling")]
    BlowUp { t_last: f64, state: [f64; 3] },
    #[error("non-finite state at t={t}")]
    NonFinite { t: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    pub step: f64,
    pub method: Method,
}

impl Trajectory {
    pub fn last(&self) -> (f64, [f64; 3]) {
        (*self.times.last().expect("non-empty"), *self.states.last().expect("non-empty"))
    }
}

fn axpy(x: &[f64; 3], h: f64, k: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| x[i] + h * k[i])
}

/// One classical RK4 increment `h/6 (k₁ + 2k₂ + 2k₃ + k₄)`.
pub fn rk4_increment(s: &LVSystem, x: &[f64; 3], h: f64) -> [f64; 3] {
    let k1 = vector_field(s, x);
    let k2 = vector_field(s, &axpy(x, h / 2.0, &k1));
    let k3 = vector_field(s, &axpy(x, h / 2.0, &k2));
    let k4 = vector_field(s, &axpy(x, h, &k3));
    std::array::from_fn(|i| h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Fixed-step RK4 from `t0` to `t1` (either direction).
///
/// The state is accumulated with Kahan compensation so that long runs at
/// small steps are limited by truncation error rather than by roundoff.
pub fn integrate_span(
    s: &LVSystem,
    x0: [f64; 3],
    t0: f64,
    t1: f64,
    h: f64,
    ceiling: f64,
) -> Result<Trajectory, IntegrateError> {
    let span = (t1 - t0).abs();
    if !(h > 0.0 && h.is_finite() && span > 0.0 && span.is_finite()) {
        return Err(IntegrateError::BadStep { h, span });
    }
    let n = (span / h).round().max(1.0) as usize;
    let dt = (t1 - t0) / n as f64;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut x = x0;
    let mut comp = [0.0; 3];
    times.push(t0);
    states.push(x);
    for step in 1..=n {
        let inc = rk4_increment(s, &x, dt);
        for i in 0..3 {
            let y = inc[i] - comp[i];
            let t = x[i] + y;
            comp[i] = (t - x[i]) - y;
            x[i] = t;
        }
        let t = t0 + step as f64 * dt;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::NonFinite { t });
        }
        if x.iter().any(|v| v.abs() > ceiling) {
            let (t_last, state) = (times[times.len() - 1], states[states.len() - 1]);
            return Err(IntegrateError::BlowUp { t_last, state });
        }
        times.push(t);
        states.push(x);
    }
    Ok(Trajectory { times, states, step: dt.abs(), method: Method::Rk4 })
}

pub fn integrate(s: &LVSystem, x0: [f64; 3], t_end: f64, h: f64) -> Result<Trajectory, IntegrateError> {
    integrate_span(s, x0, 0.0, t_end, h, DEFAULT_CEILING)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriftReport {
    /// Max relative `|H(t) − H(0)| / |H(0)|` (absolute when `H(0) = 0`).
    pub h_drift: f64,
    /// Same for the Casimir, over the positive-orthant prefix.
    pub f_drift: f64,
    /// Whether the whole trajectory stayed in the open positive orthant.
    pub valid_region: bool,
}

fn rel(v: f64, v0: f64) -> f64 {
    if v0 == 0.0 {
        (v - v0).abs()
    } else {
        ((v - v0) / v0).abs()
    }
}

pub fn drift_report(s: &LVSystem, traj: &Trajectory) -> DriftReport {
    let h0 = hamiltonian(&traj.states[0]);
    let h_drift = traj.states.iter().map(|x| rel(hamiltonian(x), h0)).fold(0.0, f64::max);
    let positive = |x: &[f64; 3]| x.iter().all(|v| *v > 0.0);
    let prefix: Vec<&[f64; 3]> = traj.states.iter().take_while(|x| positive(x)).collect();
    let valid_region = prefix.len() == traj.states.len();
    let f_drift = match prefix.first().and_then(|x| casimir(s, x).ok()) {
        Some(f0) => prefix
            .iter()
            .filter_map(|x| casimir(s, x).ok())
            .map(|f| rel(f, f0))
            .fold(0.0, f64::max),
        None => 0.0,
    };
    DriftReport { h_drift, f_drift, valid_region }
}

/// Richardson estimate of the global error of the step-`h` endpoint:
/// `‖x_h − x_{h/2}‖∞ / 15`.
pub fn richardson_error(s: &LVSystem, x0: [f64; 3], t_end: f64, h: f64) -> Result<f64, IntegrateError> {
    let coarse = integrate(s, x0, t_end, h)?.last().1;
    let fine = integrate(s, x0, t_end, h / 2.0)?.last().1;
    Ok((0..3).map(|i| (coarse[i] - fine[i]).abs()).fold(0.0, f64::max) / 15.0)
}

/// Least-squares slope of `log|x|` against `log(t* − t)`; a simple pole
/// gives about −1. Diagnostic only.
pub fn pole_order_fit(times: &[f64], values: &[f64], t_star: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, v)| **t < t_star && v.abs() > 0.0)
        .map(|(t, v)| ((t_star - t).ln(), v.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    (den > 0.0).then(|| num / den)
}

/// Integrates until blow-up and fits the pole order of the largest
/// component over the last decade before the ceiling.
pub fn probe_pole_order(s: &LVSystem, x0: [f64; 3], t_max: f64, h: f64) -> Option<f64> {
    let ceiling = 1e8;
    let mut times = vec![0.0];
    let mut states = vec![x0];
    let (mut t, mut x) = (0.0, x0);
    while t < t_max {
        let inc = rk4_increment(s, &x, h);
        let next: [f64; 3] = std::array::from_fn(|i| x[i] + inc[i]);
        if !next.iter().all(|v| v.is_finite()) || next.iter().any(|v| v.abs() > ceiling) {
            break;
        }
        t += h;
        x = next;
        times.push(t);
        states.push(x);
    }
    if t >= t_max {
        return None;
    }
    let comp = (0..3).max_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs()))?;
    let vals: Vec<f64> = states.iter().map(|s| s[comp]).collect();
    // For a simple pole 1/x is linear in t; extrapolate its zero from the last two samples.
    let n = vals.len();
    let (t1, t2, y1, y2) = (times[n - 2], times[n - 1], 1.0 / vals[n - 2], 1.0 / vals[n - 1]);
    let t_star = t2 - y2 * (t2 - t1) / (y2 - y1);
    let peak = vals[n - 1].abs();
    let window: Vec<usize> = (0..n).filter(|&i| vals[i].abs() > peak / 1e3 && vals[i].abs() < peak / 10.0).collect();
    let ts: Vec<f64> = window.iter().map(|&i| times[i]).collect();
    let vs: Vec<f64> = window.iter().map(|&i| vals[i]).collect();
    pole_order_fit(&ts, &vs, t_star)
}
