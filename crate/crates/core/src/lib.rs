//! Exact analysis of algebraic complete integrability for the
//! three-dimensional skew-symmetric Lotka-Volterra family.

pub mod balances;
pub mod classify;
pub mod dynamics;
pub mod exactmath;
pub mod laurent;
pub mod report;
pub mod system;
