use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Polynomial;
use super::scalar::Rational;

/// Rational roots of a polynomial, with multiplicity, in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRoots {
    pub roots: Vec<Rational>,
    /// True iff the product of the linear factors `(x − r)` recovers the
    /// polynomial up to its leading coefficient.
    pub fully_factored: bool,
}

/// All rational roots of a nonzero polynomial.
///
/// Zero roots and `±1` are split off first (they are the common case for
/// Kowalevski spectra), quadratics are solved in closed form and anything of
/// higher degree falls back to the rational root theorem on the primitive
/// integer form.
pub fn rational_roots(p: &Polynomial) -> RationalRoots {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut rest = p.monic();

    while rest.degree().unwrap_or(0) > 0 && rest.coeff(0).is_zero() {
        roots.push(Rational::zero());
        rest = Polynomial::new(rest.coeffs()[1..].to_vec());
    }

    'outer: loop {
        let deg = rest.degree().unwrap_or(0);
        if deg == 0 {
            break;
        }
        for cand in [Rational::one(), -Rational::one()] {
            if rest.eval(&cand).is_zero() {
                rest = deflate(&rest, &cand);
                roots.push(cand);
                continue 'outer;
            }
        }
        match deg {
            1 => {
                let r = -rest.coeff(0) / rest.coeff(1);
                roots.push(r);
                rest = Polynomial::one();
            }
            2 => {
                if let Some((r1, r2)) = quadratic_roots(&rest) {
                    roots.push(r1);
                    roots.push(r2);
                    rest = Polynomial::one();
                }
                break;
            }
            _ => match theorem_candidate(&rest) {
                Some(r) => {
                    rest = deflate(&rest, &r);
                    roots.push(r);
                }
                None => break,
            },
        }
    }

    roots.sort();
    RationalRoots { fully_factored: rest.degree() == Some(0), roots }
}

fn deflate(p: &Polynomial, root: &Rational) -> Polynomial {
    let (q, r) = p.div_rem(&Polynomial::new(vec![-root.clone(), Rational::one()]));
    debug_assert!(r.is_zero());
    q
}

fn sqrt_rational(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

fn quadratic_roots(p: &Polynomial) -> Option<(Rational, Rational)> {
    let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
    let sq = sqrt_rational(&disc)?;
    let two_a = Rational::from_integer(2.into()) * &a;
    Some(((-&b - &sq) / &two_a, (-&b + &sq) / two_a))
}

/// Integer coefficients with content one, same roots as `p`.
fn primitive_integer_form(p: &Polynomial) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn theorem_candidate(p: &Polynomial) -> Option<Rational> {
    let ints = primitive_integer_form(p);
    let a0 = ints.first()?.abs().to_biguint()?;
    let an = ints.last()?.abs().to_biguint()?;
    let num_divs = divisors(&a0);
    let den_divs = divisors(&an);
    for q in &den_divs {
        for n in &num_divs {
            for sign in [1, -1] {
                let cand = Rational::new(BigInt::from(n.clone()) * sign, BigInt::from(q.clone()));
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    if n.is_zero() {
        return vec![BigUint::one()];
    }
    let factors = match n.to_u128() {
        Some(small) => factor_u128(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect(),
        None => factor_big(n),
    };
    let mut divs = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn factor_big(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
            if let Some(small) = n.to_u128() {
                out.extend(factor_u128(small).into_iter().map(|(q, e)| (BigUint::from(q), e)));
                return out;
            }
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}
