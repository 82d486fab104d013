use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::scalar::{Field, Rational, Scalar};

/// Exponent vector of a monomial; trailing zero exponents are trimmed so the
/// representation is canonical regardless of how many variables exist.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let e = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        Monomial(e)
    }
}

/// Sparse multivariate polynomial with coefficients in a field `F`.
///
/// Variables are numbered from zero; they stand for the free parameters of a
/// Laurent expansion in the order they were introduced.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MPoly<F> {
    pub fn constant(c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i), F::one());
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Substitutes `values[i]` for variable `i`. Missing values count as zero.
    pub fn eval(&self, values: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                let v = values.get(i).cloned().unwrap_or_else(F::zero);
                for _ in 0..e {
                    term = term * v.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }
}

impl<F: Field> Zero for MPoly<F> {
    fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field> Add for MPoly<F> {
    type Output = MPoly<F>;
    fn add(mut self, rhs: MPoly<F>) -> MPoly<F> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<F: Field> Sub for MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, rhs: MPoly<F>) -> MPoly<F> {
        self + (-rhs)
    }
}

impl<F: Field> Neg for MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        MPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<F: Field> Mul for MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, rhs: MPoly<F>) -> MPoly<F> {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<F: Field> Scalar for MPoly<F> {
    fn from_rational(r: &Rational) -> Self {
        MPoly::constant(F::from_rational(r))
    }
}

impl<F: Field + fmt::Display> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*p{i}")?,
                    _ => write!(f, "*p{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
