//! Named numeric verification checks, selectable at run time.

use num_traits::Zero;

use crate::exactmath::{rat, rat_int, to_f64};
use crate::laurent::{aci_test, default_order, expand, instantiate};
use crate::system::LVSystem;

use super::closed_form::{closed_form_solution, fit_closed_form};
use super::integrate::{drift_report, integrate, IntegrateError};
use super::lax::{km_h3, km_system, lax_residual_km};
use super::series::series_errors;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub x0: [f64; 3],
    pub t_end: f64,
    pub h: f64,
    pub drift_tol: f64,
    /// Minimum drift reduction when the step is halved.
    pub order_ratio: f64,
    pub laurent_order: usize,
    /// Value given to every series parameter in the Laurent comparison.
    pub laurent_param: i64,
    pub laurent_tol: f64,
    pub closed_form_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            x0: [1.0, 2.0, 3.0],
            t_end: 10.0,
            h: 1e-3,
            drift_tol: 1e-8,
            order_ratio: 12.0,
            laurent_order: 8,
            laurent_param: 5,
            laurent_tol: 1e-4,
            closed_form_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Named measurements, in insertion order.
    pub metrics: Vec<(String, f64)>,
}

pub trait VerifyCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn applies(&self, s: &LVSystem, cfg: &VerifyConfig) -> bool;
    fn run(&self, s: &LVSystem, cfg: &VerifyConfig) -> Result<CheckOutcome, IntegrateError>;
}

/// Conservation of `H` and, inside the positive orthant, of `F`.
pub struct DriftCheck;

impl VerifyCheck for DriftCheck {
    fn name(&self) -> &'static str {
        "drift"
    }
    fn applies(&self, _: &LVSystem, _: &VerifyConfig) -> bool {
        true
    }
    fn run(&self, s: &LVSystem, cfg: &VerifyConfig) -> Result<CheckOutcome, IntegrateError> {
        let d = drift_report(s, &integrate(s, cfg.x0, cfg.t_end, cfg.h)?);
        Ok(CheckOutcome {
            name: self.name(),
            passed: d.h_drift < cfg.drift_tol && d.f_drift < cfg.drift_tol,
            metrics: vec![
                ("h_drift".into(), d.h_drift),
                ("f_drift".into(), d.f_drift),
                ("valid_region".into(), if d.valid_region { 1.0 } else { 0.0 }),
            ],
        })
    }
}

/// Fourth-order scaling of the Casimir drift. `H` is linear and RK4
/// preserves it to roundoff, so its drift carries no order information.
pub struct OrderCheck;

impl VerifyCheck for OrderCheck {
    fn name(&self) -> &'static str {
        "order"
    }
    fn applies(&self, _: &LVSystem, cfg: &VerifyConfig) -> bool {
        cfg.x0.iter().all(|v| *v > 0.0)
    }
    fn run(&self, s: &LVSystem, cfg: &VerifyConfig) -> Result<CheckOutcome, IntegrateError> {
        let coarse = drift_report(s, &integrate(s, cfg.x0, cfg.t_end, cfg.h)?).f_drift;
        let fine = drift_report(s, &integrate(s, cfg.x0, cfg.t_end, cfg.h / 2.0)?).f_drift;
        let ratio = if fine > 0.0 { coarse / fine } else { f64::INFINITY };
        Ok(CheckOutcome {
            name: self.name(),
            passed: ratio >= cfg.order_ratio || coarse == 0.0,
            metrics: vec![("f_drift_h".into(), coarse), ("f_drift_h2".into(), fine), ("ratio".into(), ratio)],
        })
    }
}

/// Exact Lax identity at the initial state and drift of `1 + x₁x₂x₃`.
pub struct KmLaxCheck;

impl VerifyCheck for KmLaxCheck {
    fn name(&self) -> &'static str {
        "km-lax"
    }
    fn applies(&self, s: &LVSystem, _: &VerifyConfig) -> bool {
        *s == km_system()
    }
    fn run(&self, s: &LVSystem, cfg: &VerifyConfig) -> Result<CheckOutcome, IntegrateError> {
        let traj = integrate(s, cfg.x0, cfg.t_end, cfg.h)?;
        let h3_0 = km_h3(&cfg.x0);
        let drift = traj
            .states
            .iter()
            .map(|x| ((km_h3(x) - h3_0) / h3_0).abs())
            .fold(0.0, f64::max);
        let exact: Vec<_> = cfg.x0.iter().map(|v| crate::exactmath::Rational::from_float(*v)).collect();
        let residual_zero = match exact.as_slice() {
            [Some(a), Some(b), Some(c)] => lax_residual_km(&[a.clone(), b.clone(), c.clone()]).is_zero(),
            _ => false,
        };
        Ok(CheckOutcome {
            name: self.name(),
            passed: residual_zero && drift < cfg.drift_tol,
            metrics: vec![("h3_drift".into(), drift), ("lax_residual_zero".into(), if residual_zero { 1.0 } else { 0.0 })],
        })
    }
}

/// RK4 against the explicit solution of the `b = a + c` family.
pub struct ClosedFormCheck;

impl VerifyCheck for ClosedFormCheck {
    fn name(&self) -> &'static str {
        "closed-form"
    }
    fn applies(&self, s: &LVSystem, cfg: &VerifyConfig) -> bool {
        s.casimir_degree().is_zero() && !s.a().is_zero() && cfg.x0[2] != 0.0 && cfg.x0.iter().sum::<f64>() != 0.0
    }
    fn run(&self, s: &LVSystem, cfg: &VerifyConfig) -> Result<CheckOutcome, IntegrateError> {
        let traj = integrate(s, cfg.x0, cfg.t_end, cfg.h)?;
        let p = fit_closed_form(to_f64(s.a()), to_f64(s.c()), cfg.x0).expect("applies() checked fit conditions");
        let mut err = 0.0f64;
        let mut sum_dev = 0.0f64;
        for (t, x) in traj.times.iter().zip(&traj.states) {
            let Ok(y) = closed_form_solution(&p, *t) else { continue };
            let norm = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            err = err.max((0..3).fold(0.0f64, |m, i| m.max((x[i] - y[i]).abs())) / norm);
            sum_dev = sum_dev.max((y.iter().sum::<f64>() - p.k).abs() / p.k.abs());
        }
        Ok(CheckOutcome {
            name: self.name(),
            passed: err < cfg.closed_form_tol,
            metrics: vec![("max_rel_error".into(), err), ("sum_deviation".into(), sum_dev)],
        })
    }
}

/// Truncated series of the witness balance against RK4 near the pole.
pub struct LaurentCheck;

impl VerifyCheck for LaurentCheck {
    fn name(&self) -> &'static str {
        "laurent"
    }
    fn applies(&self, s: &LVSystem, _: &VerifyConfig) -> bool {
        aci_test(s).is_aci
    }
    fn run(&self, s: &LVSystem, cfg: &VerifyConfig) -> Result<CheckOutcome, IntegrateError> {
        let w = aci_test(s).witness.expect("applies() checked a.c.i.");
        let order = cfg.laurent_order.max(default_order(&w.spectrum));
        let bal = expand(s, &w.component, order).expect("order covers the largest exponent");
        let params = vec![rat_int(cfg.laurent_param); bal.series_param_count()];
        let line = rat(1, 3);
        let coeffs = match instantiate(&bal, &params, &line) {
            Ok(c) => c,
            Err(_) => instantiate(&bal, &params, &rat(2, 7)).expect("at most finitely many poles"),
        };
        let errs = series_errors(s, &coeffs, &[1e-3, 1e-2], 1e-6)?;
        Ok(CheckOutcome {
            name: self.name(),
            passed: errs[1] < cfg.laurent_tol,
            metrics: vec![("order".into(), order as f64), ("rel_error_t1e-2".into(), errs[1])],
        })
    }
}

/// Checks registered by name.
pub struct CheckRegistry {
    checks: Vec<Box<dyn VerifyCheck>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(DriftCheck));
        r.register(Box::new(OrderCheck));
        r.register(Box::new(KmLaxCheck));
        r.register(Box::new(ClosedFormCheck));
        r.register(Box::new(LaurentCheck));
        r
    }

    /// Adds a check, replacing any existing one with the same name.
    pub fn register(&mut self, check: Box<dyn VerifyCheck>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn VerifyCheck> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    /// Resolves names in order, failing on the first unknown one.
    pub fn select<'a>(&'a self, names: &[String]) -> Result<Vec<&'a dyn VerifyCheck>, String> {
        names.iter().map(|n| self.get(n).ok_or_else(|| n.clone())).collect()
    }

    pub fn all(&self) -> Vec<&dyn VerifyCheck> {
        self.checks.iter().map(|c| c.as_ref()).collect()
    }
}
