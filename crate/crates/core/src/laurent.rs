//! Laurent-series free-parameter test.
//!
//! A balance `x(t) = t⁻¹ Σ_k x⁽ᵏ⁾ tᵏ` is built step by step from
//! `(k·I − 𝒦) x⁽ᵏ⁾ = R⁽ᵏ⁾`. Coefficients are polynomials in the free
//! parameters introduced so far, with coefficients in `Q(s)` where `s` is
//! the position along a line component (constant for isolated points).
//! Compatibility at a resonance is therefore checked as an identity in the
//! parameters, not at sampled values.

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::balances::{
    component_spectrum, indicial_locus, integrality_report, kowalevski_matrix_at, IndicialComponent,
    IntegralityReport, KowalevskiSpectrum,
};
use crate::exactmath::{is_integer, kernel, solve_linear, LinearSolution, MPoly, Monomial, RatFunc, Rational, Scalar};
use crate::system::{rates, LVSystem};

pub type Coeff = MPoly<RatFunc>;
pub type CoeffVector = [Coeff; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("step {step} needs coefficients 0..{step}, only {available} available")]
    MissingCoefficients { step: usize, available: usize },
    #[error("order {order} is below the largest positive exponent {required}")]
    OrderTooSmall { order: usize, required: usize },
    #[error("the origin carries no pole and cannot seed a balance")]
    TrivialComponent,
    #[error("line parameter hits a pole of a coefficient")]
    LinePole,
}

/// `R⁽ᵏ⁾_i = Σ_{l=1}^{k−1} x_i⁽ˡ⁾ (A x⁽ᵏ⁻ˡ⁾)_i`.
pub fn step_rhs<T: Scalar>(s: &LVSystem, coeffs: &[[T; 3]], k: usize) -> Result<[T; 3], LaurentError> {
    if k == 0 || coeffs.len() < k {
        return Err(LaurentError::MissingCoefficients { step: k, available: coeffs.len() });
    }
    let mut acc: [T; 3] = std::array::from_fn(|_| T::zero());
    for l in 1..k {
        let r = rates(s, &coeffs[k - l]);
        for i in 0..3 {
            acc[i] = acc[i].clone() + coeffs[l][i].clone() * r[i].clone();
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamSlot {
    /// Position along a line of leading coefficients.
    Line,
    /// Series variable `p{index}` of the coefficient polynomials.
    Series(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeParam {
    pub step: usize,
    pub basis: [RatFunc; 3],
    pub slot: ParamSlot,
}

impl FreeParam {
    /// The basis vector when it does not depend on the line parameter.
    pub fn constant_basis(&self) -> Option<[Rational; 3]> {
        let v: Vec<Rational> = self.basis.iter().filter_map(RatFunc::as_constant).collect();
        v.try_into().ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Balance {
    pub component: IndicialComponent,
    pub spectrum: KowalevskiSpectrum,
    /// `coefficients[k]` is `x⁽ᵏ⁾`; shorter than `truncation_order + 1` when obstructed.
    pub coefficients: Vec<CoeffVector>,
    pub free_params: Vec<FreeParam>,
    pub obstructed_at: Option<usize>,
    pub truncation_order: usize,
    /// Steps at which `k·I − 𝒦` was singular.
    pub resonant_steps: Vec<usize>,
}

impl Balance {
    pub fn is_obstructed(&self) -> bool {
        self.obstructed_at.is_some()
    }

    pub fn free_param_count(&self) -> usize {
        self.free_params.len()
    }

    pub fn free_param_steps(&self) -> Vec<usize> {
        self.free_params.iter().map(|p| p.step).collect()
    }

    pub fn series_param_count(&self) -> usize {
        self.free_params.iter().filter(|p| matches!(p.slot, ParamSlot::Series(_))).count()
    }

    pub fn max_param_step(&self) -> usize {
        self.free_params.iter().map(|p| p.step).max().unwrap_or(0)
    }

    /// Whether the free parameters can be taken to be the named coordinates
    /// `(coordinate, step)`, coordinates 1-based: at each step the basis
    /// restricted to the named coordinates must be nonsingular.
    pub fn matches_labels(&self, labels: &[(usize, usize)]) -> bool {
        if labels.len() != self.free_params.len() {
            return false;
        }
        let mut steps: Vec<usize> = labels.iter().map(|l| l.1).collect();
        steps.sort();
        steps.dedup();
        steps.iter().all(|&k| {
            let coords: Vec<usize> = labels.iter().filter(|l| l.1 == k).map(|l| l.0 - 1).collect();
            let basis: Vec<&[RatFunc; 3]> = self.free_params.iter().filter(|p| p.step == k).map(|p| &p.basis).collect();
            if coords.len() != basis.len() || coords.iter().any(|&c| c > 2) {
                return false;
            }
            match coords.len() {
                1 => !basis[0][coords[0]].is_zero(),
                2 => {
                    let (i, j) = (coords[0], coords[1]);
                    let det = basis[0][i].clone() * basis[1][j].clone() - basis[0][j].clone() * basis[1][i].clone();
                    !det.is_zero()
                }
                _ => false,
            }
        })
    }
}

/// Largest positive integer exponent, or 0.
pub fn max_positive_step(spec: &KowalevskiSpectrum) -> usize {
    spec.exponents
        .iter()
        .filter(|e| is_integer(e) && e > &&Rational::zero())
        .map(|e| e.to_integer().try_into().unwrap_or(usize::MAX))
        .max()
        .unwrap_or(0)
}

pub fn default_order(spec: &KowalevskiSpectrum) -> usize {
    max_positive_step(spec) + 2
}

fn leading_coefficient(comp: &IndicialComponent) -> [RatFunc; 3] {
    match comp {
        IndicialComponent::Point { point } => point.coords.clone().map(RatFunc::constant),
        IndicialComponent::Line { base, direction } => std::array::from_fn(|i| {
            RatFunc::constant(base.coords[i].clone()) + RatFunc::constant(direction[i].clone()) * RatFunc::var()
        }),
    }
}

/// Runs the recursion for steps `1..=order`.
pub fn expand(s: &LVSystem, comp: &IndicialComponent, order: usize) -> Result<Balance, LaurentError> {
    if comp.is_trivial() {
        return Err(LaurentError::TrivialComponent);
    }
    let spectrum = component_spectrum(s, comp).spectrum;
    let required = max_positive_step(&spectrum);
    if order < required {
        return Err(LaurentError::OrderTooSmall { order, required });
    }
    let x0 = leading_coefficient(comp);
    let k_mat = kowalevski_matrix_at(s, &x0);
    let mut coefficients: Vec<CoeffVector> = vec![x0.clone().map(MPoly::constant)];
    let mut free_params = Vec::new();
    let mut resonant_steps = Vec::new();
    let mut obstructed_at = None;
    let mut next_var = 0;

    if let IndicialComponent::Line { direction, .. } = comp {
        free_params.push(FreeParam {
            step: 0,
            basis: direction.clone().map(RatFunc::constant),
            slot: ParamSlot::Line,
        });
    }

    for k in 1..=order {
        let m = k_mat.shifted_negation(RatFunc::constant(Rational::from_integer(k.into())));
        let rhs = step_rhs(s, &coefficients, k)?;
        let mut monomials: Vec<&Monomial> = rhs.iter().flat_map(|c| c.terms().map(|(m, _)| m)).collect();
        monomials.sort();
        monomials.dedup();

        let mut xk: CoeffVector = std::array::from_fn(|_| MPoly::zero());
        let mut compatible = true;
        for mono in monomials {
            let v: [RatFunc; 3] = std::array::from_fn(|i| rhs[i].coeff(mono));
            match solve_linear(&m, &v) {
                LinearSolution::Inconsistent => {
                    compatible = false;
                    break;
                }
                sol => {
                    let p = sol.particular().expect("consistent system has a particular solution");
                    for i in 0..3 {
                        xk[i].add_term(mono.clone(), p[i].clone());
                    }
                }
            }
        }
        let ker = kernel(&m);
        if !ker.is_empty() {
            resonant_steps.push(k);
        }
        if !compatible {
            obstructed_at = Some(k);
            break;
        }
        for basis in ker {
            let var: Coeff = MPoly::var(next_var);
            for i in 0..3 {
                xk[i] = xk[i].clone() + var.scale(&basis[i]);
            }
            free_params.push(FreeParam { step: k, basis, slot: ParamSlot::Series(next_var) });
            next_var += 1;
        }
        coefficients.push(xk);
    }

    Ok(Balance {
        component: comp.clone(),
        spectrum,
        coefficients,
        free_params,
        obstructed_at,
        truncation_order: order,
        resonant_steps,
    })
}

/// Concrete coefficients for given series parameters (`p0, p1, …`) and,
/// for a line, the line parameter.
pub fn instantiate(bal: &Balance, params: &[Rational], line: &Rational) -> Result<Vec<[Rational; 3]>, LaurentError> {
    bal.coefficients
        .iter()
        .map(|xk| {
            let mut out: [Rational; 3] = std::array::from_fn(|_| Rational::zero());
            for i in 0..3 {
                let mut concrete: MPoly<Rational> = MPoly::zero();
                for (mono, c) in xk[i].terms() {
                    concrete.add_term(mono.clone(), c.eval(line).ok_or(LaurentError::LinePole)?);
                }
                out[i] = concrete.eval(params);
            }
            Ok(out)
        })
        .collect()
}

/// Substitutes the truncated series into `ẋ − f(x)` and checks that the
/// coefficients of `t⁻², …, t^(upto−2)` vanish.
///
/// Works on `P(t) = Σ x⁽ᵏ⁾tᵏ` directly: `t²(ẋ − f) = tP′ − P − P∘(A P)`, so
/// it shares nothing with [`step_rhs`] beyond the system itself.
pub fn residual_check(s: &LVSystem, coeffs: &[[Rational; 3]], upto: usize) -> bool {
    use crate::exactmath::Polynomial;
    if coeffs.len() < upto + 1 {
        return false;
    }
    let p: [Polynomial; 3] =
        std::array::from_fn(|i| Polynomial::new(coeffs[..=upto].iter().map(|x| x[i].clone()).collect()));
    let a = s.matrix();
    let ap: [Polynomial; 3] = std::array::from_fn(|i| {
        (0..3).fold(Polynomial::zero(), |acc, j| &acc + &p[j].scale(&a.0[i][j]))
    });
    (0..3).all(|i| {
        let tdp = &Polynomial::x() * &p[i].derivative();
        let q = &(&tdp - &p[i]) - &(&p[i] * &ap[i]);
        (0..=upto).all(|j| q.coeff(j).is_zero())
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ACIVerdict {
    pub is_aci: bool,
    pub integrality: IntegralityReport,
    /// One balance per non-trivial component; empty when the integrality gate fails.
    pub balances: Vec<Balance>,
    pub witness: Option<Balance>,
    pub free_param_total: usize,
}

/// Integrality gate followed by the free-parameter test on every component.
///
/// The witness is the unobstructed balance with exactly two free parameters
/// whose parameters appear earliest, ties going to locus order.
pub fn aci_test(s: &LVSystem) -> ACIVerdict {
    aci_test_with_order(s, None).expect("default order covers the largest exponent")
}

/// As [`aci_test`], expanding every component to `order` instead of its
/// default.
pub fn aci_test_with_order(s: &LVSystem, order: Option<usize>) -> Result<ACIVerdict, LaurentError> {
    let integrality = integrality_report(s);
    if !integrality.all_integer {
        return Ok(ACIVerdict { is_aci: false, integrality, balances: Vec::new(), witness: None, free_param_total: 0 });
    }
    let comps: Vec<IndicialComponent> = indicial_locus(s).into_iter().filter(|c| !c.is_trivial()).collect();
    let balances = comps
        .par_iter()
        .map(|c| {
            let n = order.unwrap_or_else(|| default_order(&component_spectrum(s, c).spectrum));
            expand(s, c, n)
        })
        .collect::<Result<Vec<Balance>, LaurentError>>()?;
    let witness = balances
        .iter()
        .filter(|b| !b.is_obstructed() && b.free_param_count() == 2)
        .min_by_key(|b| b.max_param_step())
        .cloned();
    let free_param_total = match &witness {
        Some(w) => w.free_param_count(),
        None => balances.iter().filter(|b| !b.is_obstructed()).map(Balance::free_param_count).max().unwrap_or(0),
    };
    Ok(ACIVerdict { is_aci: witness.is_some(), integrality, balances, witness, free_param_total })
}

/// Convenience for tests and reports: `x⁽ᵏ⁾` evaluated with all parameters
/// set to `value` and the line parameter to `line`.
pub fn coefficients_at(bal: &Balance, value: &Rational, line: &Rational) -> Result<Vec<[Rational; 3]>, LaurentError> {
    let n = bal.series_param_count();
    instantiate(bal, &vec![value.clone(); n], line)
}
