//! Gauss quadrature on [0,1] and ordered-simplex rules.
//!
//! The simplex `0 < s_1 < … < s_n < 1` is parametrized multiplicatively,
//! `s_k = u_k · s_{k+1}` with `s_{n+1} := 1`, which keeps integrands of the
//! deformation series smooth (no sorting kinks). The Jacobian `Π_{k≥2} s_k =
//! Π_l u_l^{l-1}` is a monomial in the cube variables and is absorbed exactly
//! into per-axis Gauss–Jacobi rules with weight `u^{l-1}`.

use crate::{lit, Scalar};
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights on [0,1]; the axis weight `u^alpha` is already folded
/// into `weights`, so `Σ w_i f(u_i) ≈ ∫_0^1 u^alpha f(u) du`.
#[derive(Debug, Clone)]
pub struct QuadRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub alpha: usize,
}

/// Gauss–Jacobi rule of the given order on [0,1] with weight `u^alpha`
/// (Golub–Welsch on the monic Jacobi recurrence; `alpha = 0` is plain
/// Gauss–Legendre). Exact for polynomials of degree ≤ 2·order − 1.
pub fn gauss_jacobi_01<T: Scalar>(order: usize, alpha: usize) -> QuadRule<T> {
    assert!(order >= 1, "quadrature order must be >= 1");
    let n = order;
    let a = T::zero();
    let b = lit::<T>(alpha as f64);
    let two = lit::<T>(2.0);

    // Monic Jacobi recurrence coefficients on [-1,1] with weight (1-x)^a (1+x)^b.
    let diag = |k: usize| -> T {
        let kk = lit::<T>(k as f64);
        let s = two * kk + a + b;
        if k == 0 {
            (b - a) / (a + b + two)
        } else {
            (b * b - a * a) / (s * (s + two))
        }
    };
    let off2 = |k: usize| -> T {
        // β_k for k >= 1
        let kk = lit::<T>(k as f64);
        let s = two * kk + a + b;
        if k == 1 {
            lit::<T>(4.0) * (a + T::one()) * (b + T::one())
                / ((a + b + two) * (a + b + two) * (a + b + two + T::one()))
        } else {
            lit::<T>(4.0) * kk * (kk + a) * (kk + b) * (kk + a + b)
                / (s * s * (s + T::one()) * (s - T::one()))
        }
    };
    // total mass ∫_{-1}^{1} (1+x)^b dx = 2^{b+1}/(b+1) for a = 0
    let mass = two.powi(alpha as i32 + 1) / (b + T::one());

    let mut m = DMatrix::<T>::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = diag(k);
        if k + 1 < n {
            let e = off2(k + 1).sqrt();
            m[(k, k + 1)] = e;
            m[(k + 1, k)] = e;
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(T, T)> = (0..n)
        .map(|j| {
            let x = eig.eigenvalues[j];
            let v0 = eig.eigenvectors[(0, j)];
            (x, mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());

    // map x ∈ [-1,1] to u = (1+x)/2 and rescale the weight ((1+x)/2)^b dx/2
    let half = lit::<T>(0.5);
    let scale = two.powi(-(alpha as i32) - 1);
    let nodes = pairs.iter().map(|p| (p.0 + T::one()) * half).collect();
    let weights = pairs.iter().map(|p| p.1 * scale).collect();
    QuadRule {
        nodes,
        weights,
        alpha,
    }
}

/// Gauss–Legendre on [0,1].
pub fn gauss_legendre_01<T: Scalar>(order: usize) -> QuadRule<T> {
    gauss_jacobi_01(order, 0)
}

/// Gauss–Legendre on [a,b].
pub fn gauss_legendre_ab<T: Scalar>(order: usize, a: T, b: T) -> QuadRule<T> {
    let base = gauss_legendre_01::<T>(order);
    let len = b - a;
    QuadRule {
        nodes: base.nodes.iter().map(|&u| a + len * u).collect(),
        weights: base.weights.iter().map(|&w| w * len).collect(),
        alpha: 0,
    }
}

/// Tensorized rule on the ordered simplex `0 < s_1 < … < s_n < 1`.
///
/// Axis `l` (1-based) carries the Gauss–Jacobi rule with weight `u^{l-1}`,
/// so constants integrate to the exact simplex volume `1/n!` at any order.
#[derive(Debug, Clone)]
pub struct SimplexRule<T> {
    axes: Vec<QuadRule<T>>,
}

impl<T: Scalar> SimplexRule<T> {
    /// Per-axis orders, `orders[l-1]` for axis `l`; all must be ≥ 1.
    pub fn with_orders(orders: &[usize]) -> Self {
        let axes = orders
            .iter()
            .enumerate()
            .map(|(i, &q)| gauss_jacobi_01::<T>(q, i))
            .collect();
        SimplexRule { axes }
    }

    /// Uniform order on every axis.
    pub fn new(n: usize, order: usize) -> Self {
        Self::with_orders(&vec![order; n])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Total number of tensor points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|r| r.nodes.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Visit every node: `f(s, w)` with `s` the ordered point and `w` the
    /// weight including the Duffy Jacobian. Traversal order is fixed
    /// (lexicographic in the axis indices, outermost axis last), so
    /// reductions done in visit order are reproducible.
    pub fn for_each(&self, mut f: impl FnMut(&[T], T)) {
        let n = self.dim();
        if n == 0 {
            return;
        }
        let mut s = vec![T::zero(); n];
        self.walk(n - 1, T::one(), T::one(), &mut s, &mut f);
    }

    fn walk(&self, axis: usize, s_next: T, w_acc: T, s: &mut Vec<T>, f: &mut impl FnMut(&[T], T)) {
        let rule = &self.axes[axis];
        for (u, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let sk = *u * s_next;
            s[axis] = sk;
            let w_new = w_acc * *w;
            if axis == 0 {
                f(&s[..], w_new);
            } else {
                self.walk(axis - 1, sk, w_new, s, f);
            }
        }
    }
}
