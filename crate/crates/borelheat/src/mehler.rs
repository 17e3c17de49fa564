//! The harmonic Gaussian kernel u_ω (Mehler's formula) and the classical
//! paths entering the deformation series.

use crate::defmatrix::shc;
use crate::error::{Error, Result};
use crate::linalg::{cnorm, principal_pow_neg_half};
use crate::{lit, C, Scalar};
use nalgebra::ComplexField;

/// Empirically validated δ of the path bound `|q_ω(s)| ≤ 4 max(|x|,|y|)`
/// for `|ωt| < δ` (swept over random ωt in the disk and endpoints).
pub const DELTA_PATH: f64 = 0.5;

/// Evaluation point of the harmonic kernel. Validity: t ≠ 0 with Re t ≥ 0,
/// and |ωt| < π so that sh(ωt) stays off its zero set and the principal
/// square root of sh(ωt)/ω is taken on one branch.
#[derive(Debug, Clone)]
pub struct KernelPoint<T: Scalar> {
    pub t: C<T>,
    pub x: Vec<C<T>>,
    pub y: Vec<C<T>>,
    pub omega: C<T>,
}

impl<T: Scalar> KernelPoint<T> {
    pub fn new(t: C<T>, x: Vec<C<T>>, y: Vec<C<T>>, omega: C<T>) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::config("endpoints must share a positive dimension"));
        }
        if t == C::new(T::zero(), T::zero()) {
            return Err(Error::domain("t must be nonzero"));
        }
        if t.re < T::zero() {
            return Err(Error::domain("Re t must be nonnegative"));
        }
        if (omega * t).modulus() >= T::pi() {
            return Err(Error::domain("|omega*t| must stay below pi"));
        }
        Ok(KernelPoint { t, x, y, omega })
    }

    pub fn nu(&self) -> usize {
        self.x.len()
    }
}

/// Mehler kernel
/// `u_ω = (4π sh(ωt)/ω)^{−ν/2} exp(−(ω/4 sh(ωt)) (ch(ωt)(x²+y²) − 2x·y))`,
/// written with sh(ωt)/ω = t·shc(ωt) so that ω → 0 recovers the free kernel
/// `(4πt)^{−ν/2} e^{−(x−y)²/4t}` without cancellation. Scalar multiple of the
/// identity; the scalar is returned.
pub fn mehler_kernel<T: Scalar>(p: &KernelPoint<T>) -> C<T> {
    let z = p.omega * p.t;
    let sh_over_omega = p.t * shc(z); // = sh(ωt)/ω
    let four_pi = lit::<T>(4.0) * T::pi();
    let pref = principal_pow_neg_half(sh_over_omega.scale(four_pi), p.nu());

    let x2 = crate::linalg::bilinear_dot(&p.x, &p.x);
    let y2 = crate::linalg::bilinear_dot(&p.y, &p.y);
    let xy = crate::linalg::bilinear_dot(&p.x, &p.y);
    let quad = z.cosh() * (x2 + y2) - xy.scale(lit::<T>(2.0));
    let expo = -quad / (sh_over_omega.scale(lit::<T>(4.0)));
    pref * expo.exp()
}

/// Classical path `q_ω(s) = (sh(ωts)x + sh(ωt(1−s))y)/sh(ωt)` normalized to
/// s ∈ [0,1]; endpoints q(0) = y, q(1) = x; ω → 0 limit y + s(x−y).
pub fn classical_path<T: Scalar>(
    omega: C<T>,
    t: C<T>,
    s: T,
    x: &[C<T>],
    y: &[C<T>],
) -> Result<Vec<C<T>>> {
    let z = omega * t;
    if z != C::new(T::zero(), T::zero()) && z.sinh() == C::new(T::zero(), T::zero()) {
        return Err(Error::Pole {
            omega_t_re: z.re.to_f64(),
            omega_t_im: z.im.to_f64(),
        });
    }
    let (cx, cy) = path_coefficients(z, s);
    Ok(x.iter()
        .zip(y.iter())
        .map(|(&xv, &yv)| cx * xv + cy * yv)
        .collect())
}

/// Coefficients (a, b) with q_ω(s) = a·x + b·y: `a = s·shc(ωts)/shc(ωt)`,
/// `b = (1−s)·shc(ωt(1−s))/shc(ωt)`.
pub fn path_coefficients<T: Scalar>(z: C<T>, s: T) -> (C<T>, C<T>) {
    let denom = shc(z);
    let a = shc(z.scale(s)).scale(s) / denom;
    let sb = T::one() - s;
    let b = shc(z.scale(sb)).scale(sb) / denom;
    (a, b)
}

/// Max of |q_ω(s)| / max(|x|,|y|) over a path sample, used to validate the
/// `≤ 4` bound of the small-|ωt| regime.
pub fn path_excursion<T: Scalar>(omega: C<T>, t: C<T>, x: &[C<T>], y: &[C<T>], n_s: usize) -> Result<T> {
    let nx = cnorm(x);
    let ny = cnorm(y);
    let denom = if nx > ny { nx } else { ny };
    if denom == T::zero() {
        return Ok(T::zero());
    }
    let mut worst = T::zero();
    for i in 0..=n_s {
        let s = lit::<T>(i as f64 / n_s as f64);
        let q = classical_path(omega, t, s, x, y)?;
        let r = cnorm(&q) / denom;
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}
