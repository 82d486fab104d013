//! Equivalence under coordinate permutation and rescaling, canonical forms,
//! the two Diophantine lemmas behind the integer-exponent analysis, and the
//! six-class classifier.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactmath::{is_integer, rat, rat_int, render_rational, Rational};
use crate::system::{LVSystem, SystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("group element has zero scale")]
    ZeroScale,
    #[error(transparent)]
    System(#[from] SystemError),
}

/// A permutation of `{0,1,2}` stored as its image list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub [usize; 3]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2]);

    /// All six permutations in a fixed order: id, (1 2), (1 3), (2 3), (1 2 3), (1 3 2).
    pub const ALL: [Perm; 6] = [
        Perm([0, 1, 2]),
        Perm([1, 0, 2]),
        Perm([2, 1, 0]),
        Perm([0, 2, 1]),
        Perm([1, 2, 0]),
        Perm([2, 0, 1]),
    ];

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = [0; 3];
        for i in 0..3 {
            inv[self.0[i]] = i;
        }
        Perm(inv)
    }

    pub fn is_odd(&self) -> bool {
        let p = self.0;
        let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        inversions % 2 == 1
    }

    /// Cycle notation on `{1,2,3}`.
    pub fn name(&self) -> &'static str {
        match self.0 {
            [0, 1, 2] => "id",
            [1, 0, 2] => "(1 2)",
            [2, 1, 0] => "(1 3)",
            [0, 2, 1] => "(2 3)",
            [1, 2, 0] => "(1 2 3)",
            [2, 0, 1] => "(1 3 2)",
            _ => unreachable!("not a permutation of three points"),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A coordinate permutation combined with a time rescaling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub sigma: Perm,
    pub scale: Rational,
}

impl GroupElement {
    pub fn new(sigma: Perm, scale: Rational) -> Result<Self, ClassifyError> {
        if scale.is_zero() {
            return Err(ClassifyError::ZeroScale);
        }
        Ok(GroupElement { sigma, scale })
    }

    pub fn identity() -> Self {
        GroupElement { sigma: Perm::IDENTITY, scale: Rational::one() }
    }

    pub fn perm(sigma: Perm) -> Self {
        GroupElement { sigma, scale: Rational::one() }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { sigma: self.sigma.inverse(), scale: Rational::one() / &self.scale }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.sigma, render_rational(&self.scale))
    }
}

/// `A′_im = a_{σ(i)σ(m)} / scale`.
pub fn apply_group(g: &GroupElement, s: &LVSystem) -> Result<LVSystem, ClassifyError> {
    if g.scale.is_zero() {
        return Err(ClassifyError::ZeroScale);
    }
    let a = s.matrix();
    let entry = |i: usize, m: usize| &a.0[g.sigma.apply(i)][g.sigma.apply(m)] / &g.scale;
    Ok(LVSystem::new(entry(0, 1), entry(0, 2), entry(1, 2))?)
}

/// The element acting as `g1` after `g2`.
pub fn compose(g1: &GroupElement, g2: &GroupElement) -> GroupElement {
    let sigma = Perm(std::array::from_fn(|i| g2.sigma.apply(g1.sigma.apply(i))));
    GroupElement { sigma, scale: &g1.scale * &g2.scale }
}

fn first_nonzero(s: &LVSystem) -> Rational {
    s.coeffs().into_iter().find(|x| !x.is_zero()).expect("nonzero system")
}

/// The six permutation images, each scaled so its first nonzero entry is 1.
pub fn orbit(s: &LVSystem) -> Vec<(LVSystem, GroupElement)> {
    Perm::ALL
        .iter()
        .map(|&sigma| {
            let image = apply_group(&GroupElement::perm(sigma), s).expect("unit scale");
            let g = GroupElement { sigma, scale: first_nonzero(&image) };
            (apply_group(&g, s).expect("nonzero scale"), g)
        })
        .collect()
}

/// Lexicographically smallest normalized image, with the element reaching it.
pub fn normalize(s: &LVSystem) -> (LVSystem, GroupElement) {
    orbit(s).into_iter().min_by(|x, y| x.0.cmp(&y.0)).expect("six images")
}

pub fn is_isomorphic(s1: &LVSystem, s2: &LVSystem) -> bool {
    normalize(s1).0 == normalize(s2).0
}

/// Element mapping `s` onto `target`, if they are equivalent.
pub fn find_map(s: &LVSystem, target: &LVSystem) -> Option<GroupElement> {
    let (rep_s, g_s) = normalize(s);
    let (rep_t, g_t) = normalize(target);
    (rep_s == rep_t).then(|| compose(&g_t.inverse(), &g_s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    L2,
    L3,
    L4,
    L6,
    LLambda,
    LZero,
    NotACI,
    Degenerate,
}

impl ClassKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassKind::L2 => "l2",
            ClassKind::L3 => "l3",
            ClassKind::L4 => "l4",
            ClassKind::L6 => "l6",
            ClassKind::LLambda => "l_lambda",
            ClassKind::LZero => "l0",
            ClassKind::NotACI => "not_aci",
            ClassKind::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed representatives of the four sporadic classes.
pub fn sporadic_representatives() -> [(ClassKind, LVSystem); 4] {
    let s = |a, b, c| LVSystem::from_ints(a, b, c).expect("nonzero");
    [
        (ClassKind::L2, s(1, 0, 1)),
        (ClassKind::L3, s(1, -1, 1)),
        (ClassKind::L4, s(1, -1, 2)),
        (ClassKind::L6, s(1, -2, 3)),
    ]
}

pub fn lambda_representative(lambda: &Rational) -> LVSystem {
    LVSystem::new(Rational::one(), Rational::one(), lambda.clone()).expect("nonzero")
}

pub fn zero_representative(mu: &Rational) -> LVSystem {
    LVSystem::new(Rational::one(), Rational::one() + mu, mu.clone()).expect("nonzero")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLabel {
    pub kind: ClassKind,
    /// Integer λ of `(1,1,λ)`.
    pub lambda: Option<Rational>,
    /// μ of `(1,1+μ,μ)`, read from the first matching image.
    pub mu: Option<Rational>,
    /// Every μ realized by some image of the orbit, ascending.
    pub mu_orbit: Vec<Rational>,
    /// Maps the input exactly onto the class representative.
    pub witness: Option<GroupElement>,
    /// Further classes whose orbit also contains the input.
    pub also: Vec<ClassKind>,
    pub notes: Vec<String>,
}

impl ClassLabel {
    fn bare(kind: ClassKind) -> Self {
        ClassLabel { kind, lambda: None, mu: None, mu_orbit: Vec::new(), witness: None, also: Vec::new(), notes: Vec::new() }
    }

    /// The class representative the witness maps onto.
    pub fn representative(&self) -> Option<LVSystem> {
        match self.kind {
            ClassKind::LLambda => self.lambda.as_ref().map(lambda_representative),
            ClassKind::LZero => self.mu.as_ref().map(zero_representative),
            ClassKind::NotACI | ClassKind::Degenerate => None,
            k => sporadic_representatives().into_iter().find(|r| r.0 == k).map(|r| r.1),
        }
    }

    /// Integrable according to the classifier (Degenerate counts as integrable).
    pub fn predicts_aci(&self) -> bool {
        self.kind != ClassKind::NotACI
    }
}

/// Images of the form `(1, b′, c′)`, obtained by scaling each permutation
/// image by its first coefficient.
fn unit_first_images(s: &LVSystem) -> Vec<(LVSystem, GroupElement)> {
    Perm::ALL
        .iter()
        .filter_map(|&sigma| {
            let image = apply_group(&GroupElement::perm(sigma), s).ok()?;
            if image.a().is_zero() {
                return None;
            }
            let g = GroupElement { sigma, scale: image.a().clone() };
            Some((apply_group(&g, s).ok()?, g))
        })
        .collect()
}

fn lambda_match(s: &LVSystem) -> Option<(Rational, GroupElement)> {
    unit_first_images(s)
        .into_iter()
        .find(|(img, _)| img.b().is_one() && !img.c().is_zero() && is_integer(img.c()))
        .map(|(img, g)| (img.c().clone(), g))
}

pub fn classify(s: &LVSystem) -> ClassLabel {
    if s.zero_count() == 2 {
        let mut label = ClassLabel::bare(ClassKind::Degenerate);
        label.notes.push("two coefficients vanish: one species is decoupled".into());
        return label;
    }
    if s.casimir_degree().is_zero() {
        let images: Vec<_> = unit_first_images(s).into_iter().filter(|(img, _)| !img.c().is_zero()).collect();
        let mut label = ClassLabel::bare(ClassKind::LZero);
        let (img, g) = images.first().cloned().expect("a-b+c=0 with one zero leaves a usable image");
        label.mu = Some(img.c().clone());
        label.witness = Some(g);
        let mut mus: Vec<Rational> = images.into_iter().map(|(i, _)| i.c().clone()).collect();
        mus.sort();
        mus.dedup();
        label.mu_orbit = mus;
        if s.zero_count() == 1 {
            label.notes.push("orbit contains (1,1,0), the excluded lambda=0 case; read as l0".into());
        }
        return label;
    }

    let mut found: Vec<ClassLabel> = Vec::new();
    for (kind, rep) in sporadic_representatives() {
        if let Some(g) = find_map(s, &rep) {
            let mut label = ClassLabel::bare(kind);
            label.witness = Some(g);
            found.push(label);
        }
    }
    if let Some((lambda, g)) = lambda_match(s) {
        let mut label = ClassLabel::bare(ClassKind::LLambda);
        label.lambda = Some(lambda);
        label.witness = Some(g);
        found.push(label);
    }
    if found.is_empty() {
        return ClassLabel::bare(ClassKind::NotACI);
    }
    let mut label = found.remove(0);
    label.also = found.into_iter().map(|l| l.kind).collect();
    label
}

/// Brute-force pairs `1 ≤ x ≤ y ≤ bound` with `(x+y)/(xy−x−y) ∈ ℤ`.
pub fn lemma1_solutions(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in 1..=bound {
        for y in x..=bound {
            let den = x * y - x - y;
            if den != 0 && (x + y) % den == 0 {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn lemma1_closed_form(bound: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (1..=bound).map(|l| (1, l)).collect();
    out.extend([(2, 3), (2, 4), (2, 6), (3, 3), (3, 6), (4, 4)].into_iter().filter(|&(_, y)| y <= bound));
    out.sort();
    out
}

/// Brute-force pairs `1 ≤ x, y ≤ bound` with `(x−y)/(xy+y−x) ∈ ℤ`.
pub fn lemma2_solutions(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in 1..=bound {
        for y in 1..=bound {
            if (x - y) % (x * y + y - x) == 0 {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn lemma2_closed_form(bound: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (1..=bound).map(|l| (l, 1)).chain((2..=bound).map(|l| (l, l))).collect();
    out.sort();
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("exponents must be nonzero")]
    ZeroExponent,
    #[error("k1*k2 = k1 + k2 outside the (2,2) case")]
    SingularDenominator,
    #[error("third exponent {0} is not an integer")]
    NonIntegralK3(String),
}

/// The one-parameter family `(a, (k₁+k₂−k₁k₂)a/k₂, k₁a/k₂)` at `a = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentFamily {
    pub system: LVSystem,
    pub k3: Option<i64>,
}

pub fn family_from_exponents(k1: i64, k2: i64) -> Result<ExponentFamily, FamilyError> {
    if k1 == 0 || k2 == 0 {
        return Err(FamilyError::ZeroExponent);
    }
    let den = k1 * k2 - k1 - k2;
    if den == 0 {
        if (k1, k2) == (2, 2) {
            let system = LVSystem::from_ints(1, 0, 1).expect("nonzero");
            return Ok(ExponentFamily { system, k3: None });
        }
        return Err(FamilyError::SingularDenominator);
    }
    let k3 = rat(k1 * k2, den);
    if !is_integer(&k3) {
        return Err(FamilyError::NonIntegralK3(render_rational(&k3)));
    }
    let system = LVSystem::new(Rational::one(), rat(k1 + k2 - k1 * k2, k2), rat(k1, k2)).expect("a = 1");
    Ok(ExponentFamily { system, k3: Some((k1 * k2) / den) })
}

/// First `(k₂,…,kₙ)` in lexicographic order with `Σ kⱼρⱼ = m` and `Σ kⱼ ≤ m`.
pub fn degree_relation_check(exponents: &[i64], m: i64) -> Option<Vec<i64>> {
    fn search(rho: &[i64], m: i64, budget: i64, acc: i64, ks: &mut Vec<i64>) -> bool {
        if ks.len() == rho.len() {
            return acc == m;
        }
        let r = rho[ks.len()];
        for k in 0..=budget {
            ks.push(k);
            if search(rho, m, budget - k, acc + k * r, ks) {
                return true;
            }
            ks.pop();
        }
        false
    }
    if m < 0 {
        return None;
    }
    let mut ks = Vec::with_capacity(exponents.len());
    search(exponents, m, m, 0, &mut ks).then_some(ks)
}

/// The Casimir degree `a − b + c` of a class representative.
pub fn class_casimir_degree(label: &ClassLabel) -> Option<Rational> {
    match label.kind {
        ClassKind::L2 => Some(rat_int(2)),
        ClassKind::L3 => Some(rat_int(3)),
        ClassKind::L4 => Some(rat_int(4)),
        ClassKind::L6 => Some(rat_int(6)),
        ClassKind::LLambda => label.lambda.clone(),
        ClassKind::LZero => Some(Rational::zero()),
        ClassKind::NotACI | ClassKind::Degenerate => None,
    }
}
