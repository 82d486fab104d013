//! Explicit solution of the `b = a + c` family.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("denominator vanishes at t={0}")]
    PoleAt(f64),
    #[error("cannot fit: need a != 0, x3 != 0 and x1+x2+x3 != 0")]
    Unfittable,
}

/// Constants of the closed form; `k` is the value of `x₁+x₂+x₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormParams {
    pub a: f64,
    pub c: f64,
    pub k: f64,
    pub c1: f64,
    pub c2: f64,
}

/// `x₁ = kC₁e^{akt}/D`, `x₃ = k a e^{−ckt}/D`, `x₂ = k − x₁ − x₃` with
/// `D = C₁e^{akt} + a e^{−ckt} − C₂`.
pub fn closed_form_solution(p: &ClosedFormParams, t: f64) -> Result<[f64; 3], ClosedFormError> {
    let e1 = p.c1 * (p.a * p.k * t).exp();
    let e3 = p.a * (-p.c * p.k * t).exp();
    let den = e1 + e3 - p.c2;
    let scale = e1.abs() + e3.abs() + p.c2.abs();
    if den == 0.0 || den.abs() <= 1e-14 * scale {
        return Err(ClosedFormError::PoleAt(t));
    }
    let x1 = p.k * e1 / den;
    let x3 = p.k * e3 / den;
    Ok([x1, -p.k * p.c2 / den, x3])
}

/// Constants reproducing `x0` at `t = 0`.
pub fn fit_closed_form(a: f64, c: f64, x0: [f64; 3]) -> Result<ClosedFormParams, ClosedFormError> {
    let k = x0[0] + x0[1] + x0[2];
    if a == 0.0 || x0[2] == 0.0 || k == 0.0 {
        return Err(ClosedFormError::Unfittable);
    }
    Ok(ClosedFormParams { a, c, k, c1: a * x0[0] / x0[2], c2: -a * x0[1] / x0[2] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{vector_field, LVSystem};

    #[test]
    fn fit_reproduces_initial_state() {
        let p = fit_closed_form(1.0, 2.0, [1.0, 2.0, 3.0]).unwrap();
        let x = closed_form_solution(&p, 0.0).unwrap();
        for i in 0..3 {
            assert!((x[i] - [1.0, 2.0, 3.0][i]).abs() < 1e-14);
        }
        assert_eq!(fit_closed_form(0.0, 2.0, [1.0, 2.0, 3.0]), Err(ClosedFormError::Unfittable));
    }

    #[test]
    fn satisfies_ode() {
        let s = LVSystem::from_ints(2, 1, -1).unwrap();
        let p = ClosedFormParams { a: 2.0, c: -1.0, k: 0.7, c1: 1.3, c2: -0.4 };
        let h = 1e-5;
        for t in [0.0, 0.3, 1.1] {
            let x = closed_form_solution(&p, t).unwrap();
            let xp = closed_form_solution(&p, t + h).unwrap();
            let xm = closed_form_solution(&p, t - h).unwrap();
            let f = vector_field(&s, &x);
            for i in 0..3 {
                assert!(((xp[i] - xm[i]) / (2.0 * h) - f[i]).abs() < 1e-8);
            }
            assert!((x.iter().sum::<f64>() - p.k).abs() < 1e-14);
        }
    }

    #[test]
    fn pole_detected() {
        // D(0) = C1 + a - C2 = 0
        let p = ClosedFormParams { a: 1.0, c: 1.0, k: 1.0, c1: 1.0, c2: 2.0 };
        assert_eq!(closed_form_solution(&p, 0.0), Err(ClosedFormError::PoleAt(0.0)));
    }
}
