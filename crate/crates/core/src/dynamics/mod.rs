//! Floating-point cross-checks: RK4 trajectories, drift of the conserved
//! quantities, the explicit `b = a + c` solution, the periodic KM Lax pair
//! and the truncated Laurent series near a pole.

mod checks;
mod closed_form;
mod integrate;
mod lax;
mod series;

pub use checks::{
    CheckOutcome, CheckRegistry, ClosedFormCheck, DriftCheck, KmLaxCheck, LaurentCheck, OrderCheck, VerifyCheck,
    VerifyConfig,
};
pub use closed_form::{closed_form_solution, fit_closed_form, ClosedFormError, ClosedFormParams};
pub use integrate::{
    drift_report, integrate, integrate_span, pole_order_fit, probe_pole_order, richardson_error, rk4_increment,
    DriftReport, IntegrateError, Method, Trajectory, DEFAULT_CEILING,
};
pub use lax::{km_h3, km_system, lax_pair, lax_residual_km};
pub use series::{eval_series, laurent_vs_numeric, series_errors};
