//! The three-dimensional skew-symmetric Lotka-Volterra system
//! `ẋ_i = x_i (A x)_i` with `A = [[0,a,b],[−a,0,c],[−b,−c,0]]`, its
//! quadratic Poisson structure, the Hamiltonian `H = x₁+x₂+x₃` and the
//! Casimir `F = x₁^c x₂^(−b) x₃^a`.
//!
//! The field and the Poisson tensor are written once, generic over
//! [`Scalar`], so the same code runs on exact rationals, on symbolic series
//! coefficients and on `f64` states. Exact and floating states cannot be
//! mixed in one call because the scalar type is fixed per call.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactmath::{is_integer, render_rational, to_f64, Mat3, RatMatrix, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("the zero system (0,0,0) has no dynamics")]
    ZeroSystem,
    #[error("component x{index} = {value} is not admissible for exponent {exponent}")]
    Domain { index: usize, value: String, exponent: String },
    #[error("component x{0} is zero")]
    ZeroComponent(usize),
}

/// Interaction coefficients `(a, b, c)` of the skew matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LVSystem {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl LVSystem {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, SystemError> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(SystemError::ZeroSystem);
        }
        Ok(LVSystem { a, b, c })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self, SystemError> {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()), Rational::from_integer(c.into()))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn coeffs(&self) -> [Rational; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }

    /// The skew-symmetric interaction matrix `A`.
    pub fn matrix(&self) -> RatMatrix {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let z = Rational::zero();
        Mat3([
            [z.clone(), a.clone(), b.clone()],
            [-a, z.clone(), c.clone()],
            [-b, -c, z],
        ])
    }

    /// `a − b + c`: the weighted degree of the Casimir and the numerator of
    /// every non-trivial Kowalevski exponent.
    pub fn casimir_degree(&self) -> Rational {
        &self.a - &self.b + &self.c
    }

    /// `(c, −b, a)`, the exponents of `F`; also spans `ker A`.
    pub fn casimir_exponents(&self) -> [Rational; 3] {
        [self.c.clone(), -self.b.clone(), self.a.clone()]
    }

    pub fn scaled(&self, t: &Rational) -> Result<Self, SystemError> {
        Self::new(&self.a * t, &self.b * t, &self.c * t)
    }

    /// Number of zero coefficients.
    pub fn zero_count(&self) -> usize {
        [&self.a, &self.b, &self.c].iter().filter(|x| x.is_zero()).count()
    }
}

impl fmt::Display for LVSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            render_rational(&self.a),
            render_rational(&self.b),
            render_rational(&self.c)
        )
    }
}

/// `(A x)_i`, the per-species growth rate.
pub fn rates<T: Scalar>(s: &LVSystem, x: &[T; 3]) -> [T; 3] {
    let a = T::from_rational(&s.a);
    let b = T::from_rational(&s.b);
    let c = T::from_rational(&s.c);
    [
        a.clone() * x[1].clone() + b.clone() * x[2].clone(),
        c.clone() * x[2].clone() - a * x[0].clone(),
        -(b * x[0].clone()) - c * x[1].clone(),
    ]
}

/// `(ax₁x₂+bx₁x₃, −ax₁x₂+cx₂x₃, −bx₁x₃−cx₂x₃)`.
pub fn vector_field<T: Scalar>(s: &LVSystem, x: &[T; 3]) -> [T; 3] {
    let r = rates(s, x);
    std::array::from_fn(|i| x[i].clone() * r[i].clone())
}

pub fn hamiltonian<T: Scalar>(x: &[T; 3]) -> T {
    x[0].clone() + x[1].clone() + x[2].clone()
}

/// `π(x)` with `π_ij = a_ij x_i x_j`.
pub fn poisson_matrix<T: Scalar>(s: &LVSystem, x: &[T; 3]) -> Mat3<T> {
    let a = s.matrix();
    Mat3::from_fn(|i, j| T::from_rational(&a.0[i][j]) * x[i].clone() * x[j].clone())
}

/// Evaluates `F = x₁^c · x₂^(−b) · x₃^a` in floating point.
///
/// Non-positive components are allowed only where the matching exponent is
/// a non-negative integer.
pub fn casimir(s: &LVSystem, x: &[f64; 3]) -> Result<f64, SystemError> {
    let mut value = 1.0;
    for (i, (xi, e)) in x.iter().zip(s.casimir_exponents()).enumerate() {
        if e.is_zero() {
            continue;
        }
        if is_integer(&e) && !e.is_negative() {
            value *= xi.powi(e.to_integer().try_into().unwrap_or(i32::MAX));
        } else if *xi > 0.0 {
            value *= xi.powf(to_f64(&e));
        } else {
            return Err(SystemError::Domain {
                index: i + 1,
                value: xi.to_string(),
                exponent: render_rational(&e),
            });
        }
    }
    Ok(value)
}

/// Exact check of `π(x)·∇log F = 0` at a point with nonzero components.
pub fn casimir_gradient_check(s: &LVSystem, x: &[Rational; 3]) -> Result<bool, SystemError> {
    if let Some(i) = x.iter().position(|v| v.is_zero()) {
        return Err(SystemError::ZeroComponent(i + 1));
    }
    let e = s.casimir_exponents();
    let grad: [Rational; 3] = std::array::from_fn(|i| &e[i] / &x[i]);
    Ok(poisson_matrix(s, x).mul_vec(&grad).iter().all(|v| v.is_zero()))
}
