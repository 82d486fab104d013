use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::One;

use super::poly::Polynomial;
use super::scalar::{Field, Rational, Scalar};

pub type RatVector = [Rational; 3];
pub type RatMatrix = Mat3<Rational>;

/// A 3×3 matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat3<U> {
        Mat3::from_fn(|i, j| f(&self.0[i][j]))
    }

    pub fn mul_vec(&self, v: &[T; 3]) -> [T; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(T::zero(), |acc, j| acc + self.0[i][j].clone() * v[j].clone())
        })
    }

    pub fn mul(&self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| {
            (0..3).fold(T::zero(), |acc, k| acc + self.0[i][k].clone() * rhs.0[k][j].clone())
        })
    }

    pub fn add(&self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i][j].clone() + rhs.0[i][j].clone())
    }

    pub fn sub(&self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i][j].clone() - rhs.0[i][j].clone())
    }

    pub fn transpose(&self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone() + self.0[2][2].clone()
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
        };
        m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
            + m[0][2].clone() * minor(1, 2, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_zero())
    }
}

impl<T: Scalar + One> Mat3<T> {
    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: [T; 3]) -> Self {
        let mut m = Self::zero();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    /// `k·I − self`.
    pub fn shifted_negation(&self, k: T) -> Self {
        Self::from_fn(|i, j| {
            let diag = if i == j { k.clone() } else { T::zero() };
            diag - self.0[i][j].clone()
        })
    }
}

impl<T> Index<(usize, usize)> for Mat3<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: fmt::Display> fmt::Display for Mat3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.0.iter().enumerate() {
            if r > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} {} {}", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Unique,
    Affine,
    Inconsistent,
}

/// Solution set of `M·x = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F> {
    Unique([F; 3]),
    /// `particular + span(kernel)`; kernel is non-empty.
    Affine { particular: [F; 3], kernel: Vec<[F; 3]> },
    Inconsistent,
}

impl<F: Field> LinearSolution<F> {
    pub fn kind(&self) -> SolutionKind {
        match self {
            LinearSolution::Unique(_) => SolutionKind::Unique,
            LinearSolution::Affine { .. } => SolutionKind::Affine,
            LinearSolution::Inconsistent => SolutionKind::Inconsistent,
        }
    }

    pub fn particular(&self) -> Option<&[F; 3]> {
        match self {
            LinearSolution::Unique(p) | LinearSolution::Affine { particular: p, .. } => Some(p),
            LinearSolution::Inconsistent => None,
        }
    }

    pub fn kernel_basis(&self) -> &[[F; 3]] {
        match self {
            LinearSolution::Affine { kernel, .. } => kernel,
            _ => &[],
        }
    }
}

/// Reduced row echelon form of `[M | rhs]` with leftmost pivots.
///
/// Pivot rows are chosen by scanning the coefficient columns only, so the
/// reduction applied to the right-hand side is a fixed linear map determined
/// by `M`. That makes the particular solution linear in `rhs`.
struct Echelon<F> {
    rows: [[F; 4]; 3],
    pivots: Vec<usize>,
}

fn echelon<F: Field>(m: &Mat3<F>, rhs: &[F; 3]) -> Echelon<F> {
    let mut rows: [[F; 4]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| if j < 3 { m.0[i][j].clone() } else { rhs[i].clone() })
    });
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..3).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one() / rows[r][col].clone();
        for j in col..4 {
            rows[r][j] = rows[r][j].clone() * inv.clone();
        }
        for i in 0..3 {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in col..4 {
                let delta = factor.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - delta;
            }
        }
        pivots.push(col);
        r += 1;
        if r == 3 {
            break;
        }
    }
    Echelon { rows, pivots }
}

fn kernel_from<F: Field>(e: &Echelon<F>) -> Vec<[F; 3]> {
    (0..3)
        .filter(|c| !e.pivots.contains(c))
        .map(|free| {
            let mut v: [F; 3] = std::array::from_fn(|_| F::zero());
            v[free] = F::one();
            for (r, &pc) in e.pivots.iter().enumerate() {
                v[pc] = -e.rows[r][free].clone();
            }
            v
        })
        .collect()
}

/// Exact Gaussian elimination over `F`.
pub fn solve_linear<F: Field>(m: &Mat3<F>, rhs: &[F; 3]) -> LinearSolution<F> {
    let e = echelon(m, rhs);
    let rank = e.pivots.len();
    if (rank..3).any(|r| !e.rows[r][3].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut particular: [F; 3] = std::array::from_fn(|_| F::zero());
    for (r, &pc) in e.pivots.iter().enumerate() {
        particular[pc] = e.rows[r][3].clone();
    }
    if rank == 3 {
        LinearSolution::Unique(particular)
    } else {
        LinearSolution::Affine { particular, kernel: kernel_from(&e) }
    }
}

/// Basis of `{v : M·v = 0}`; one vector per non-pivot column, with that
/// column's entry set to one.
pub fn kernel<F: Field>(m: &Mat3<F>) -> Vec<[F; 3]> {
    let zero: [F; 3] = std::array::from_fn(|_| F::zero());
    kernel_from(&echelon(m, &zero))
}

pub fn rank<F: Field>(m: &Mat3<F>) -> usize {
    let zero: [F; 3] = std::array::from_fn(|_| F::zero());
    echelon(m, &zero).pivots.len()
}

/// `det(ρI − M)`, monic of degree three.
pub fn char_poly(m: &RatMatrix) -> Polynomial {
    let a = &m.0;
    let principal_minors = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0] + &a[0][0] * &a[2][2]
        - &a[0][2] * &a[2][0]
        + &a[1][1] * &a[2][2]
        - &a[1][2] * &a[2][1];
    Polynomial::new(vec![-m.det(), principal_minors, -m.trace(), Rational::one()])
}
