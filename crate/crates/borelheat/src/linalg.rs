//! Small helpers for the d×d complex weight matrices.

use crate::{lit, C, CMatrix, Scalar};
use nalgebra::ComplexField;

/// d×d identity.
pub fn identity<T: Scalar>(d: usize) -> CMatrix<T> {
    CMatrix::<T>::identity(d, d)
}

/// Operator 2-norm (largest singular value). Multiplicative and `|1| = 1`,
/// the norm the bounds in this crate are stated in.
pub fn op_norm<T: Scalar>(m: &CMatrix<T>) -> T {
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].modulus();
    }
    // singular values of small dense matrices; falls back to 0 for empty input
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Max entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.shape(), b.shape());
    let mut m = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        let d = (*x - *y).modulus();
        if d > m {
            m = d;
        }
    }
    m
}

/// Conjugate transpose.
pub fn adjoint<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

/// `‖m - m*‖` in the operator norm, zero for Hermitian matrices.
pub fn hermitian_defect<T: Scalar>(m: &CMatrix<T>) -> T {
    op_norm(&(m - m.adjoint()))
}

/// Principal square root with the branch cut convention θ ∈ (−π, π]:
/// `z^{1/2} = |z|^{1/2} e^{iθ/2}`. On the negative real axis this picks the
/// root with positive imaginary part regardless of the sign of `Im z = ±0`.
pub fn principal_sqrt<T: Scalar>(z: C<T>) -> C<T> {
    let r = z.modulus();
    if r == T::zero() {
        return C::new(T::zero(), T::zero());
    }
    let mut theta = z.argument();
    if theta == -T::pi() {
        theta = T::pi();
    }
    let half = theta * lit::<T>(0.5);
    let rs = r.sqrt();
    C::new(rs * half.cos(), rs * half.sin())
}

/// `w^{-ν/2}` as the ν-th power of the reciprocal principal square root,
/// keeping the §-branch convention for half-integer powers.
pub fn principal_pow_neg_half<T: Scalar>(w: C<T>, nu: usize) -> C<T> {
    let s = principal_sqrt(w);
    let inv = C::new(T::one(), T::zero()) / s;
    let mut out = C::new(T::one(), T::zero());
    for _ in 0..nu {
        out *= inv;
    }
    out
}

/// Bilinear (non-Hermitian) dot product `a·b = Σ a_k b_k` of complex vectors.
pub fn bilinear_dot<T: Scalar>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut s = C::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b.iter()) {
        s += *x * *y;
    }
    s
}

/// Bilinear dot of a real vector against a complex one.
pub fn bilinear_dot_real<T: Scalar>(a: &[T], b: &[C<T>]) -> C<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut s = C::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b.iter()) {
        s += y.scale(*x);
    }
    s
}

/// Euclidean dot of real vectors.
pub fn dot_real<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        s += *x * *y;
    }
    s
}

/// Euclidean norm `(λ·λ̄)^{1/2}` of a complex vector.
pub fn cnorm<T: Scalar>(a: &[C<T>]) -> T {
    a.iter()
        .map(|z| z.modulus_squared())
        .fold(T::zero(), |s, v| s + v)
        .sqrt()
}

/// Euclidean norm of a real vector.
pub fn rnorm<T: Scalar>(a: &[T]) -> T {
    dot_real(a, a).sqrt()
}
