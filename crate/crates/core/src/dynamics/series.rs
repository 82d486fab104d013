//! Truncated Laurent series against the numerical flow.

use crate::exactmath::{to_f64, Rational};
use crate::system::LVSystem;

use super::integrate::{integrate_span, IntegrateError, DEFAULT_CEILING};

/// `t⁻¹ Σ_k x⁽ᵏ⁾ tᵏ` in floating point.
pub fn eval_series(coeffs: &[[Rational; 3]], t: f64) -> [f64; 3] {
    let c: Vec<[f64; 3]> = coeffs.iter().map(|x| x.clone().map(|v| to_f64(&v))).collect();
    std::array::from_fn(|i| c.iter().rev().fold(0.0, |acc, x| acc * t + x[i]) / t)
}

/// Starts RK4 from the series at the smallest offset and returns, for each
/// offset, `‖x_series − x_rk4‖∞ / ‖x_series‖∞`.
pub fn series_errors(s: &LVSystem, coeffs: &[[Rational; 3]], t_offsets: &[f64], h: f64) -> Result<Vec<f64>, IntegrateError> {
    let t0 = t_offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut x = eval_series(coeffs, t0);
    let mut t = t0;
    let mut order: Vec<usize> = (0..t_offsets.len()).collect();
    order.sort_by(|&i, &j| t_offsets[i].total_cmp(&t_offsets[j]));
    let mut out = vec![0.0; t_offsets.len()];
    for i in order {
        let target = t_offsets[i];
        if target > t {
            x = integrate_span(s, x, t, target, h, DEFAULT_CEILING)?.last().1;
            t = target;
        }
        let reference = eval_series(coeffs, target);
        let norm = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = (0..3).fold(0.0f64, |m, k| m.max((reference[k] - x[k]).abs()));
        out[i] = diff / norm;
    }
    Ok(out)
}

/// Largest relative disagreement over the offsets.
pub fn laurent_vs_numeric(s: &LVSystem, coeffs: &[[Rational; 3]], t_offsets: &[f64], h: f64) -> Result<f64, IntegrateError> {
    Ok(series_errors(s, coeffs, t_offsets, h)?.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat_int;
    use crate::laurent::{expand, instantiate};
    use crate::balances::{IndicialComponent, IndicialPoint};

    #[test]
    fn leading_term_dominates() {
        let c = vec![[rat_int(1), rat_int(-1), rat_int(0)], [rat_int(3), rat_int(0), rat_int(2)]];
        let x = eval_series(&c, 1e-6);
        assert!((x[0] * 1e-6 - 1.0).abs() < 1e-5);
        assert!((x[1] * 1e-6 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn agreement_improves_with_order() {
        let s = LVSystem::from_ints(1, -1, 1).unwrap();
        let comp = IndicialComponent::Point { point: IndicialPoint::new([rat_int(1), rat_int(-1), rat_int(0)]) };
        let mut errs = Vec::new();
        for order in [4, 6] {
            let b = expand(&s, &comp, order).unwrap();
            let c = instantiate(&b, &[rat_int(5), rat_int(5)], &rat_int(0)).unwrap();
            errs.push(laurent_vs_numeric(&s, &c, &[1e-3, 1e-2], 1e-6).unwrap());
        }
        assert!(errs[1] < errs[0], "{errs:?}");
        assert!(errs[1] < 1e-4);
    }
}
