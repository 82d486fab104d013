//! Indicial locus and Kowalevski exponents.
//!
//! With all weights equal to one, a leading Laurent coefficient `x⁽⁰⁾` must
//! satisfy `x⁽⁰⁾_i (1 + (A x⁽⁰⁾)_i) = 0`. For a 3×3 skew matrix the solutions
//! are the origin, one point per nonzero coefficient with two-element
//! support, and, exactly when `a − b + c = 0`, the whole line `A x = −(1,1,1)`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactmath::{
    char_poly, is_integer, rational_roots, solve_linear, LinearSolution, Mat3, Polynomial,
    RatMatrix, RatVector, Rational, Scalar,
};
use crate::system::{rates, LVSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BalanceError {
    #[error("point {0:?} does not satisfy the indicial equation")]
    NotIndicial(Vec<String>),
    #[error("the origin is the trivial indicial point")]
    TrivialPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndicialPoint {
    pub coords: RatVector,
    pub is_trivial: bool,
    /// `support[i]` is true iff coordinate `i` is nonzero.
    pub support: [bool; 3],
}

impl IndicialPoint {
    pub fn new(coords: RatVector) -> Self {
        let support = [0, 1, 2].map(|i| !coords[i].is_zero());
        IndicialPoint { is_trivial: support.iter().all(|s| !s), support, coords }
    }

    /// 1-based indices of the nonzero coordinates.
    pub fn support_indices(&self) -> Vec<usize> {
        (0..3).filter(|&i| self.support[i]).map(|i| i + 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndicialComponent {
    Point { point: IndicialPoint },
    /// Every `base + t·direction` solves the indicial equation.
    Line { base: IndicialPoint, direction: RatVector },
}

impl IndicialComponent {
    pub fn base(&self) -> &IndicialPoint {
        match self {
            IndicialComponent::Point { point } => point,
            IndicialComponent::Line { base, .. } => base,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, IndicialComponent::Line { .. })
    }

    pub fn is_trivial(&self) -> bool {
        !self.is_line() && self.base().is_trivial
    }

    pub fn point_at(&self, t: &Rational) -> IndicialPoint {
        match self {
            IndicialComponent::Point { point } => point.clone(),
            IndicialComponent::Line { base, direction } => {
                IndicialPoint::new(std::array::from_fn(|i| &base.coords[i] + t * &direction[i]))
            }
        }
    }
}

/// `x + x∘(A x)`; zero exactly on the indicial locus.
pub fn indicial_residual(s: &LVSystem, x: &RatVector) -> RatVector {
    let r = rates(s, x);
    std::array::from_fn(|i| &x[i] + &x[i] * &r[i])
}

pub fn is_indicial(s: &LVSystem, x: &RatVector) -> bool {
    indicial_residual(s, x).iter().all(|v| v.is_zero())
}

/// All components of the indicial locus: the origin, the two-support points
/// `(1/b,0,−1/b)`, `(0,1/c,−1/c)`, `(1/a,−1/a,0)` where the coefficient is
/// nonzero, and the full-support line when `a − b + c = 0`.
pub fn indicial_locus(s: &LVSystem) -> Vec<IndicialComponent> {
    let zero = Rational::zero;
    let one = Rational::one();
    let mut out = vec![IndicialComponent::Point { point: IndicialPoint::new([zero(), zero(), zero()]) }];
    let mut push = |coords: RatVector| {
        out.push(IndicialComponent::Point { point: IndicialPoint::new(coords) });
    };
    if !s.b().is_zero() {
        let inv = &one / s.b();
        push([inv.clone(), zero(), -inv]);
    }
    if !s.c().is_zero() {
        let inv = &one / s.c();
        push([zero(), inv.clone(), -inv]);
    }
    if !s.a().is_zero() {
        let inv = &one / s.a();
        push([inv.clone(), -inv, zero()]);
    }
    if s.casimir_degree().is_zero() {
        let minus_ones = [-one.clone(), -one.clone(), -one];
        match solve_linear(&s.matrix(), &minus_ones) {
            LinearSolution::Affine { particular, kernel } if kernel.len() == 1 => {
                out.push(IndicialComponent::Line {
                    base: IndicialPoint::new(particular),
                    direction: kernel[0].clone(),
                });
            }
            other => unreachable!("A x = -1 must be a line when a-b+c = 0, got {:?}", other.kind()),
        }
    }
    out
}

/// `𝒦_ij = ∂f_i/∂x_j + δ_ij` at `x⁽⁰⁾`, for any scalar type.
pub fn kowalevski_matrix_at<T: Scalar + One>(s: &LVSystem, x0: &[T; 3]) -> Mat3<T> {
    let a = s.matrix();
    let r = rates(s, x0);
    Mat3::from_fn(|i, j| {
        let off = x0[i].clone() * T::from_rational(&a.0[i][j]);
        if i == j {
            off + r[i].clone() + T::one()
        } else {
            off
        }
    })
}

pub fn kowalevski_matrix(s: &LVSystem, p: &IndicialPoint) -> Result<RatMatrix, BalanceError> {
    if !is_indicial(s, &p.coords) {
        return Err(BalanceError::NotIndicial(p.coords.iter().map(|c| c.to_string()).collect()));
    }
    Ok(kowalevski_matrix_at(s, &p.coords))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KowalevskiSpectrum {
    pub point: IndicialPoint,
    pub matrix: RatMatrix,
    pub char_poly: Polynomial,
    /// Rational eigenvalues with multiplicity, ascending.
    pub exponents: Vec<Rational>,
    /// False when some eigenvalue is irrational (then `exponents` is partial).
    pub all_rational: bool,
}

impl KowalevskiSpectrum {
    pub fn all_integer(&self) -> bool {
        self.all_rational && self.exponents.iter().all(is_integer)
    }

    /// Largest positive exponent, if any.
    pub fn max_positive(&self) -> Option<Rational> {
        self.exponents.iter().filter(|e| e > &&Rational::zero()).max().cloned()
    }
}

pub fn kowalevski_exponents(s: &LVSystem, p: &IndicialPoint) -> Result<KowalevskiSpectrum, BalanceError> {
    let matrix = kowalevski_matrix(s, p)?;
    Ok(spectrum_of(p.clone(), matrix))
}

fn spectrum_of(point: IndicialPoint, matrix: RatMatrix) -> KowalevskiSpectrum {
    let cp = char_poly(&matrix);
    let roots = rational_roots(&cp);
    KowalevskiSpectrum {
        point,
        matrix,
        char_poly: cp,
        exponents: roots.roots,
        all_rational: roots.fully_factored,
    }
}

/// `𝒦(p)·p = −p`: the leading coefficient is itself the eigenvector for the
/// exponent `−1` (the time-shift direction).
pub fn minus_one_eigenvector_check(s: &LVSystem, p: &IndicialPoint) -> Result<bool, BalanceError> {
    if p.is_trivial {
        return Err(BalanceError::TrivialPoint);
    }
    let k = kowalevski_matrix(s, p)?;
    let kp = k.mul_vec(&p.coords);
    Ok((0..3).all(|i| kp[i] == -p.coords[i].clone()))
}

/// Line parameters at which the spectrum of a line component is sampled.
pub const LINE_SAMPLES: [(i64, i64); 4] = [(0, 1), (1, 1), (-1, 1), (1, 2)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSpectrum {
    pub component: IndicialComponent,
    /// Spectrum at the point, or at the base point of a line.
    pub spectrum: KowalevskiSpectrum,
    /// For a line: spectra at the sampled parameters in [`LINE_SAMPLES`].
    pub line_samples: Vec<KowalevskiSpectrum>,
}

impl ComponentSpectrum {
    /// Whether every sampled spectrum along a line coincides with the base.
    pub fn constant_along_line(&self) -> bool {
        self.line_samples.iter().all(|s| s.exponents == self.spectrum.exponents && s.all_rational)
    }
}

pub fn component_spectrum(s: &LVSystem, comp: &IndicialComponent) -> ComponentSpectrum {
    let base = comp.base().clone();
    let spectrum = spectrum_of(base.clone(), kowalevski_matrix_at(s, &base.coords));
    let line_samples = if comp.is_line() {
        LINE_SAMPLES
            .iter()
            .map(|&(n, d)| {
                let p = comp.point_at(&crate::exactmath::rat(n, d));
                spectrum_of(p.clone(), kowalevski_matrix_at(s, &p.coords))
            })
            .collect()
    } else {
        Vec::new()
    };
    ComponentSpectrum { component: comp.clone(), spectrum, line_samples }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub all_integer: bool,
    /// Non-trivial components only.
    pub components: Vec<ComponentSpectrum>,
    /// Exponents that are not integers, in order of appearance.
    pub offending: Vec<Rational>,
}

/// Integer-exponent test over every non-trivial indicial component.
pub fn integrality_report(s: &LVSystem) -> IntegralityReport {
    let components: Vec<ComponentSpectrum> = indicial_locus(s)
        .iter()
        .filter(|c| !c.is_trivial())
        .map(|c| component_spectrum(s, c))
        .collect();
    let mut offending = Vec::new();
    let mut all_integer = true;
    for cs in &components {
        for sp in std::iter::once(&cs.spectrum).chain(&cs.line_samples) {
            if !sp.all_rational {
                all_integer = false;
            }
            for e in sp.exponents.iter().filter(|e| !is_integer(e)) {
                all_integer = false;
                if !offending.contains(e) {
                    offending.push(e.clone());
                }
            }
        }
    }
    IntegralityReport { all_integer, components, offending }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_int};

    fn v(x: [i64; 3]) -> RatVector {
        x.map(rat_int)
    }

    fn sys(a: i64, b: i64, c: i64) -> LVSystem {
        LVSystem::from_ints(a, b, c).unwrap()
    }

    fn points(s: &LVSystem) -> Vec<RatVector> {
        indicial_locus(s).iter().filter(|c| !c.is_line()).map(|c| c.base().coords.clone()).collect()
    }

    #[test]
    fn locus_of_periodic_km() {
        let pts = points(&sys(1, -1, 1));
        assert_eq!(pts, vec![v([0, 0, 0]), v([-1, 0, 1]), v([0, 1, -1]), v([1, -1, 0])]);
        assert!(indicial_locus(&sys(1, -1, 1)).iter().all(|c| !c.is_line()));
    }

    #[test]
    fn locus_without_b_point() {
        let s = sys(1, 0, 1);
        let pts = points(&s);
        assert_eq!(pts, vec![v([0, 0, 0]), v([0, 1, -1]), v([1, -1, 0])]);
        assert!(pts.iter().all(|p| is_indicial(&s, p)));
    }

    #[test]
    fn locus_line_when_casimir_degree_vanishes() {
        let s = sys(1, 2, 1);
        let locus = indicial_locus(&s);
        assert_eq!(locus.len(), 5);
        let IndicialComponent::Line { base, direction } = locus.last().unwrap() else {
            panic!("expected a line");
        };
        assert_eq!(direction, &v([1, -2, 1]));
        for t in [rat_int(0), rat_int(3), rat(-7, 2)] {
            let p: RatVector = std::array::from_fn(|i| &base.coords[i] + &t * &direction[i]);
            assert!(is_indicial(&s, &p));
        }
    }

    #[test]
    fn kowalevski_matrix_examples() {
        let k = kowalevski_matrix(&sys(1, -1, 1), &IndicialPoint::new(v([1, -1, 0]))).unwrap();
        assert_eq!(k, Mat3([v([0, 1, -1]), v([1, 0, -1]), v([0, 0, 3])]));
        let k0 = kowalevski_matrix(&sys(4, 2, -3), &IndicialPoint::new(v([0, 0, 0]))).unwrap();
        assert_eq!(k0, RatMatrix::identity());
        let k = kowalevski_matrix(&sys(1, 0, 1), &IndicialPoint::new(v([0, 1, -1]))).unwrap();
        assert_eq!(k, Mat3([v([2, 0, 0]), v([-1, 0, 1]), v([0, 1, 0])]));
        assert!(matches!(
            kowalevski_matrix(&sys(1, 0, 1), &IndicialPoint::new(v([1, 1, 1]))),
            Err(BalanceError::NotIndicial(_))
        ));
    }

    #[test]
    fn exponent_examples() {
        let s = sys(1, -1, 1);
        for c in indicial_locus(&s).iter().filter(|c| !c.is_trivial()) {
            assert_eq!(kowalevski_exponents(&s, c.base()).unwrap().exponents, v([-1, 1, 3]).to_vec());
        }
        let s = sys(1, -2, 3);
        let mut thirds: Vec<Rational> = indicial_locus(&s)
            .iter()
            .filter(|c| !c.is_trivial())
            .map(|c| kowalevski_exponents(&s, c.base()).unwrap().exponents)
            .map(|e| {
                assert!(e.contains(&rat_int(-1)) && e.contains(&rat_int(1)));
                e.into_iter().max().unwrap()
            })
            .collect();
        thirds.sort();
        assert_eq!(thirds, vec![rat_int(2), rat_int(3), rat_int(6)]);
        let sp = kowalevski_exponents(&sys(1, 1, 1), &IndicialPoint::new(v([0, 1, -1]))).unwrap();
        assert_eq!(sp.exponents, v([-1, 1, 1]).to_vec());
        let origin = kowalevski_exponents(&sys(1, 1, 1), &IndicialPoint::new(v([0, 0, 0]))).unwrap();
        assert_eq!(origin.exponents, v([1, 1, 1]).to_vec());
    }

    #[test]
    fn minus_one_eigenvector_examples() {
        assert_eq!(minus_one_eigenvector_check(&sys(1, -1, 1), &IndicialPoint::new(v([1, -1, 0]))), Ok(true));
        assert_eq!(minus_one_eigenvector_check(&sys(1, 0, 1), &IndicialPoint::new(v([0, 1, -1]))), Ok(true));
        assert_eq!(
            minus_one_eigenvector_check(&sys(1, -1, 1), &IndicialPoint::new(v([0, 0, 0]))),
            Err(BalanceError::TrivialPoint)
        );
    }

    #[test]
    fn integrality_examples() {
        let r = integrality_report(&sys(1, -1, 2));
        assert!(r.all_integer);
        let mut thirds: Vec<Rational> =
            r.components.iter().map(|c| c.spectrum.exponents.iter().max().unwrap().clone()).collect();
        thirds.sort();
        assert_eq!(thirds, vec![rat_int(2), rat_int(4), rat_int(4)]);
        assert!(integrality_report(&sys(1, 1, 3)).all_integer);
        let bad = integrality_report(&sys(2, 3, 7));
        assert!(!bad.all_integer);
        assert_eq!(bad.offending, vec![rat(6, 7)]);
    }

    #[test]
    fn line_spectrum_is_constant() {
        let r = integrality_report(&sys(1, 2, 1));
        let line = r.components.iter().find(|c| c.component.is_line()).unwrap();
        assert_eq!(line.spectrum.exponents, v([-1, 0, 1]).to_vec());
        assert!(line.constant_along_line());
        assert!(r.all_integer);
    }
}
