use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::scalar::{Field, Rational, Scalar};

/// Rational function in one indeterminate `s` over the rationals.
///
/// Kept in lowest terms with a monic denominator, so equality is structural.
/// Used as the coefficient field when a leading coefficient itself carries a
/// free parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Polynomial::one() };
        }
        let g = num.gcd(&den);
        let (mut num, r1) = num.div_rem(&g);
        let (mut den, r2) = den.div_rem(&g);
        debug_assert!(r1.is_zero() && r2.is_zero());
        let lead = den.leading();
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    /// The indeterminate `s`.
    pub fn var() -> Self {
        RatFunc { num: Polynomial::x(), den: Polynomial::one() }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    /// The value as a plain rational when it does not depend on `s`.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    /// Evaluates at `s = x`; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num.render("s"))
        } else {
            write!(f, "({})/({})", self.num.render("s"), self.den.render("s"))
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Polynomial::zero(), den: Polynomial::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::constant(Rational::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den);
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RatFunc { num: &self.num * &rhs.num, den: Polynomial::one() };
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl Scalar for RatFunc {
    fn from_rational(r: &Rational) -> Self {
        RatFunc::constant(r.clone())
    }
}

impl Field for RatFunc {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_int};

    #[test]
    fn reduces_common_factors() {
        let s = RatFunc::var();
        let one = RatFunc::one();
        // (s^2 - 1) / (s - 1) = s + 1
        let q = (s.clone() * s.clone() - one.clone()) / (s.clone() - one.clone());
        assert_eq!(q, s.clone() + one.clone());
        assert!(q.denom().is_constant());
    }

    #[test]
    fn field_laws_at_points() {
        let s = RatFunc::var();
        let f = (s.clone() + RatFunc::constant(rat(1, 2))) / (s.clone() * s.clone() + RatFunc::one());
        let g = RatFunc::one() / f.clone();
        assert_eq!(f.clone() * g, RatFunc::one());
        assert_eq!(f.eval(&rat_int(1)), Some(rat(3, 4)));
        let pole = RatFunc::one() / (s - RatFunc::constant(rat_int(2)));
        assert_eq!(pole.eval(&rat_int(2)), None);
    }

    #[test]
    fn constants_collapse() {
        let c = RatFunc::constant(rat(3, 7));
        assert_eq!(c.as_constant(), Some(rat(3, 7)));
        assert_eq!(RatFunc::var().as_constant(), None);
    }
}
