//! Lax pair of the periodic KM system `(a,b,c) = (−1,1,−1)`.

use num_traits::One;

use crate::exactmath::{Mat3, Scalar};
use crate::system::{vector_field, LVSystem};

pub fn km_system() -> LVSystem {
    LVSystem::from_ints(-1, 1, -1).expect("nonzero")
}

/// `L = [[0,x₁,1],[1,0,x₂],[x₃,1,0]]` and
/// `B = [[0,0,x₁x₂],[x₂x₃,0,0],[0,x₁x₃,0]]`.
pub fn lax_pair<T: Scalar + One>(x: &[T; 3]) -> (Mat3<T>, Mat3<T>) {
    let (o, z) = (T::one, T::zero);
    let [x1, x2, x3] = x.clone();
    let l = Mat3([[z(), x1.clone(), o()], [o(), z(), x2.clone()], [x3.clone(), o(), z()]]);
    let b = Mat3([
        [z(), z(), x1.clone() * x2.clone()],
        [x2 * x3.clone(), z(), z()],
        [z(), x1 * x3, z()],
    ]);
    (l, b)
}

/// `L̇ − (LB − BL)` with `L̇` read off from `ẋ = f(x)`.
pub fn lax_residual_km<T: Scalar + One>(x: &[T; 3]) -> Mat3<T> {
    let f = vector_field(&km_system(), x);
    let z = T::zero;
    let l_dot = Mat3([[z(), f[0].clone(), z()], [z(), z(), f[1].clone()], [f[2].clone(), z(), z()]]);
    let (l, b) = lax_pair(x);
    l_dot.sub(&l.mul(&b).sub(&b.mul(&l)))
}

/// The cubic invariant `1 + x₁x₂x₃`.
pub fn km_h3<T: Scalar + One>(x: &[T; 3]) -> T {
    T::one() + x[0].clone() * x[1].clone() * x[2].clone()
}
