//! The deformation matrix Ω, its quadratic form against frequency tuples,
//! and numerical checks of its structural properties: the Green's-function
//! equation behind the closed form, positivity of the real part on the right
//! half-disk, and the growth bound.

use crate::error::{Error, Result};
use crate::linalg::dot_real;
use crate::{lit, C, Scalar};
use nalgebra::{ComplexField, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordered interior point of the unit interval simplex: 0 < s_1 < … < s_n < 1.
#[derive(Debug, Clone)]
pub struct SimplexPoint<T: Scalar>(Vec<T>);

impl<T: Scalar> SimplexPoint<T> {
    pub fn new(s: Vec<T>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::config("simplex point must be nonempty"));
        }
        let mut prev = T::zero();
        for &v in &s {
            if !(v > prev) {
                return Err(Error::config("simplex point must be strictly increasing in (0,1)"));
            }
            prev = v;
        }
        if !(prev < T::one()) {
            return Err(Error::config("simplex point must stay below 1"));
        }
        Ok(SimplexPoint(s))
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tuple (ξ_1, …, ξ_n) of real ν-vectors paired with a simplex point.
#[derive(Debug, Clone)]
pub struct FrequencyTuple<T: Scalar>(Vec<Vec<T>>);

impl<T: Scalar> FrequencyTuple<T> {
    pub fn new(xi: Vec<Vec<T>>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::config("frequency tuple must be nonempty"));
        }
        let nu = xi[0].len();
        if xi.iter().any(|v| v.len() != nu) {
            return Err(Error::config("frequency vectors must share a dimension"));
        }
        if xi.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::config("frequency entries must be finite"));
        }
        Ok(FrequencyTuple(xi))
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.0
    }

    /// Gram matrix ξ_j·ξ_k.
    pub fn gram(&self) -> DMatrix<T> {
        let n = self.0.len();
        DMatrix::from_fn(n, n, |j, k| dot_real(&self.0[j], &self.0[k]))
    }

    /// Σ_j ξ_j².
    pub fn sum_sq(&self) -> T {
        self.0
            .iter()
            .map(|v| dot_real(v, v))
            .fold(T::zero(), |a, b| a + b)
    }
}

/// sinh(w)/w, removable at 0. Below the switch point the degree-7 Taylor
/// polynomial of sh keeps the relative error under 1e-16.
pub fn shc<T: Scalar>(w: C<T>) -> C<T> {
    let small = lit::<T>(1e-4);
    if w.modulus() < small {
        let w2 = w * w;
        let one = C::new(T::one(), T::zero());
        one + w2.scale(lit::<T>(1.0 / 6.0))
            + (w2 * w2).scale(lit::<T>(1.0 / 120.0))
            + (w2 * w2 * w2).scale(lit::<T>(1.0 / 5040.0))
    } else {
        w.sinh() / w
    }
}

/// Pole test for sh(ωt): vanishing away from the removable point ωt = 0.
fn check_pole<T: Scalar>(z: C<T>) -> Result<()> {
    if z != C::new(T::zero(), T::zero()) && z.sinh() == C::new(T::zero(), T::zero()) {
        return Err(Error::Pole {
            omega_t_re: z.re.to_f64(),
            omega_t_im: z.im.to_f64(),
        });
    }
    Ok(())
}

/// Entry `sh(ωt s_{j∧k}) sh(ωt(1−s_{j∨k})) / (ω sh(ωt))` of Ω, written with
/// sh-ratios so the ω → 0 limit `t·s_{j∧k}(1−s_{j∨k})` is evaluated without
/// cancellation.
pub fn omega_entry<T: Scalar>(omega: C<T>, t: C<T>, sj: T, sk: T) -> Result<C<T>> {
    let z = omega * t;
    check_pole(z)?;
    let a = if sj < sk { sj } else { sk };
    let b = T::one() - if sj > sk { sj } else { sk };
    let num = shc(z.scale(a)).scale(a) * shc(z.scale(b)).scale(b);
    Ok(t * num / shc(z))
}

/// Factorized form of Ω against a fixed simplex point: entry (j,k) equals
/// `scale · p_{j∧k} · m_{j∨k}` with O(n) setup, used by the series engine for
/// O(n²) quadratic forms per quadrature node.
pub struct OmegaFactors<T: Scalar> {
    p: Vec<C<T>>,
    m: Vec<C<T>>,
    scale: C<T>,
}

impl<T: Scalar> OmegaFactors<T> {
    pub fn new(omega: C<T>, t: C<T>, s: &[T]) -> Result<Self> {
        let z = omega * t;
        check_pole(z)?;
        let p = s.iter().map(|&v| shc(z.scale(v)).scale(v)).collect();
        let m = s
            .iter()
            .map(|&v| {
                let b = T::one() - v;
                shc(z.scale(b)).scale(b)
            })
            .collect();
        Ok(OmegaFactors {
            p,
            m,
            scale: t / shc(z),
        })
    }

    pub fn entry(&self, j: usize, k: usize) -> C<T> {
        self.scale * self.pm(j, k)
    }

    /// Unscaled product p_{j∧k} · m_{j∨k}.
    #[inline]
    pub fn pm(&self, j: usize, k: usize) -> C<T> {
        let (a, b) = if j <= k { (j, k) } else { (k, j) };
        self.p[a] * self.m[b]
    }

    /// Common prefactor t/shc(ωt) of every entry.
    #[inline]
    pub fn scale(&self) -> C<T> {
        self.scale
    }

    /// Ω·ξ⊗ξ from the Gram matrix G_{jk} = ξ_j·ξ_k.
    pub fn qf_gram(&self, g: &DMatrix<T>) -> C<T> {
        let n = self.p.len();
        debug_assert_eq!(g.nrows(), n);
        let mut acc = C::new(T::zero(), T::zero());
        for j in 0..n {
            acc += self.pm(j, j).scale(g[(j, j)]);
            for k in (j + 1)..n {
                acc += self.pm(j, k).scale(lit::<T>(2.0) * g[(j, k)]);
            }
        }
        acc * self.scale
    }
}

/// Ω·ξ⊗_n ξ = Σ_{j,k} Ω_{jk} ξ_j·ξ_k; with ω = 0 it equals t·(Ω̄·ξ⊗_n ξ).
pub fn quadratic_form<T: Scalar>(
    omega: C<T>,
    t: C<T>,
    s: &SimplexPoint<T>,
    xi: &FrequencyTuple<T>,
) -> Result<C<T>> {
    if s.len() != xi.vectors().len() {
        return Err(Error::config("simplex point and frequency tuple lengths differ"));
    }
    let f = OmegaFactors::new(omega, t, s.coords())?;
    Ok(f.qf_gram(&xi.gram()))
}

/// Truncated eigenfunction expansion of `(μ,μ)_z = ⟨μ, (S+z²)^{-1} μ⟩` for
/// μ = Σ_j δ_{s_j} ξ_j, with S = −d²/ds² Dirichlet on [0,1]:
/// `Σ_{m≤M} 2/(m²π²+z²) (Σ_j sin(mπ s_j) ξ_j)²`. Truncation tail is O(1/M).
pub fn spectral_qf_oracle<T: Scalar>(
    z: C<T>,
    s: &SimplexPoint<T>,
    xi: &FrequencyTuple<T>,
    n_modes: usize,
) -> Result<C<T>> {
    if !(z.modulus() < T::pi()) {
        return Err(Error::domain("spectral oracle requires |z| < pi"));
    }
    if n_modes == 0 {
        return Err(Error::domain("n_modes must be >= 1"));
    }
    if s.len() != xi.vectors().len() {
        return Err(Error::config("simplex point and frequency tuple lengths differ"));
    }
    let nu = xi.vectors()[0].len();
    let z2 = z * z;
    let pi = T::pi();
    let mut acc = C::new(T::zero(), T::zero());
    let mut coeff = vec![T::zero(); nu];
    for m in 1..=n_modes {
        let mt = lit::<T>(m as f64);
        coeff.iter_mut().for_each(|c| *c = T::zero());
        for (j, sv) in s.coords().iter().enumerate() {
            let sin_m = (mt * pi * *sv).sin();
            for (c, x) in coeff.iter_mut().zip(&xi.vectors()[j]) {
                *c += sin_m * *x;
            }
        }
        let num = dot_real(&coeff, &coeff);
        acc += C::new(lit::<T>(2.0) * num, T::zero()) / (C::new(mt * mt * pi * pi, T::zero()) + z2);
    }
    Ok(acc)
}

/// Finite-difference verification of `−K'' + z²K = δ_{s=s'}` for the closed
/// form `K(s,s') = sh(z s∧s') sh(z(1−s∨s'))/(z sh z)`.
#[derive(Debug, Clone)]
pub struct GreenCheck<T> {
    /// max |−δ²K/h² + z²K| over grid nodes away from s' (expected O(h²))
    pub max_interior_residual: T,
    /// max(|K(0)|, |K(1)|) (expected exact zero)
    pub boundary_error: T,
    /// |(K'(s'⁺) − K'(s'⁻)) + 1| via one-sided 4-point stencils (O(h³))
    pub jump_error: T,
}

fn green_kernel<T: Scalar>(z: C<T>, s: T, sp: T) -> C<T> {
    let a = if s < sp { s } else { sp };
    let b = T::one() - if s > sp { s } else { sp };
    shc(z.scale(a)).scale(a) * shc(z.scale(b)).scale(b) / shc(z)
}

pub fn green_residual<T: Scalar>(z: C<T>, sprime: T, grid_n: usize) -> Result<GreenCheck<T>> {
    check_pole(z)?;
    if grid_n < 8 {
        return Err(Error::domain("grid too coarse"));
    }
    let h = T::one() / lit::<T>(grid_n as f64);
    let ip = (sprime / h).round();
    let i_sp = ip.to_f64() as usize;
    if i_sp == 0 || i_sp >= grid_n || (sprime - ip * h).abs() > lit::<T>(1e-12) {
        return Err(Error::domain("sprime must be an interior grid node"));
    }
    let k = |i: usize| green_kernel(z, lit::<T>(i as f64) * h, sprime);

    let boundary_error = {
        let b0 = k(0).modulus();
        let b1 = k(grid_n).modulus();
        if b0 > b1 {
            b0
        } else {
            b1
        }
    };

    let z2 = z * z;
    let h2 = h * h;
    let mut max_res = T::zero();
    for i in 1..grid_n {
        if i + 1 >= i_sp && i <= i_sp + 1 {
            continue; // stencil must not straddle the derivative kink
        }
        let second = (k(i + 1) - k(i).scale(lit::<T>(2.0)) + k(i - 1)).unscale(h2);
        let r = (-second + z2 * k(i)).modulus();
        if r > max_res {
            max_res = r;
        }
    }

    // one-sided third-order first derivatives at s'
    let c = [
        lit::<T>(-11.0 / 6.0),
        lit::<T>(3.0),
        lit::<T>(-1.5),
        lit::<T>(1.0 / 3.0),
    ];
    let mut dplus = C::new(T::zero(), T::zero());
    let mut dminus = C::new(T::zero(), T::zero());
    for (j, cj) in c.iter().enumerate() {
        dplus += k(i_sp + j).scale(*cj / h);
        dminus += k(i_sp - j).scale(-*cj / h);
    }
    let jump_error = (dplus - dminus + C::new(T::one(), T::zero())).modulus();

    Ok(GreenCheck {
        max_interior_residual: max_res,
        boundary_error,
        jump_error,
    })
}

/// Result of the randomized search for the largest verified T in
/// `Re t ≥ 0, |t| < T ⇒ Re(Ω·ξ⊗ξ) ≥ −tol ∧ |Ω·ξ⊗ξ| ≤ (2+tol)·n|t|Σξ²`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TdEstimate {
    pub t_d: f64,
    pub ceiling: f64,
    pub hit_ceiling: bool,
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
}

pub const TOL_POS: f64 = 1e-12;

/// Empirical lower estimate of T_d by bisection over randomized instance
/// batches. An estimate, not a certificate: the reported value is the largest
/// tested T at which every sampled instance satisfied both properties.
pub fn estimate_td<T: Scalar>(
    omega: C<T>,
    n_max: usize,
    samples: usize,
    rng_seed: u64,
) -> Result<TdEstimate> {
    let abs_om = omega.modulus();
    if abs_om > T::zero() {
        let min_part = if omega.re.abs() < omega.im.abs() {
            omega.re.abs()
        } else {
            omega.im.abs()
        };
        if min_part > lit::<T>(1e-12) * abs_om {
            return Err(Error::domain("omega must be real or purely imaginary"));
        }
    }
    if n_max == 0 || samples == 0 {
        return Err(Error::domain("n_max and samples must be positive"));
    }

    let ceiling: f64 = if abs_om == T::zero() {
        64.0
    } else {
        0.999 * std::f64::consts::PI / abs_om.to_f64()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let tol = lit::<T>(TOL_POS);
    let two = lit::<T>(2.0);

    let batch_ok = |t_cap: f64, rng: &mut ChaCha8Rng| -> bool {
        for _ in 0..samples {
            let n = rng.random_range(1..=n_max);
            let nu = rng.random_range(1..=3usize);
            let mut s: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            s.dedup();
            if s.len() != n || s[0] <= 0.0 || s[n - 1] >= 1.0 {
                continue; // measure-zero degeneracies
            }
            let xi: Vec<Vec<T>> = (0..n)
                .map(|_| {
                    (0..nu)
                        .map(|_| lit::<T>(2.0 * rng.random::<f64>() - 1.0))
                        .collect()
                })
                .collect();
            let r = t_cap * rng.random::<f64>().sqrt();
            let th = std::f64::consts::FRAC_PI_2 * (2.0 * rng.random::<f64>() - 1.0);
            let t = C::new(lit::<T>(r * th.cos()), lit::<T>(r * th.sin()));

            let st: Vec<T> = s.iter().map(|&v| lit::<T>(v)).collect();
            let f = match OmegaFactors::new(omega, t, &st) {
                Ok(f) => f,
                Err(_) => return false,
            };
            let tuple = FrequencyTuple(xi);
            let qf = f.qf_gram(&tuple.gram());
            let sum_sq = tuple.sum_sq();
            if qf.re < -tol {
                return false;
            }
            let bound = two * lit::<T>(n as f64) * t.modulus() * sum_sq;
            if qf.modulus() > bound + tol {
                return false;
            }
        }
        true
    };

    if batch_ok(ceiling, &mut rng) {
        return Ok(TdEstimate {
            t_d: ceiling,
            ceiling,
            hit_ceiling: true,
            n_max,
            samples,
            seed: rng_seed,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = ceiling;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if batch_ok(mid, &mut rng) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TdEstimate {
        t_d: lo,
        ceiling,
        hit_ceiling: false,
        n_max,
        samples,
        seed: rng_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn omega_entry_free_limit() {
        for s in [0.2, 0.5, 0.8] {
            let e = omega_entry(c(0.0, 0.0), c(1.0, 0.0), s, s).unwrap();
            assert_relative_eq!(e.re, s * (1.0 - s), epsilon = 1e-15);
            assert!(e.im.abs() < 1e-16);
        }
        // t·s_j(1−s_k) for s_j ≤ s_k, complex t
        let t = c(0.7, 0.4);
        let e = omega_entry(c(0.0, 0.0), t, 0.3, 0.6).unwrap();
        let expect = t.scale(0.3 * 0.4);
        assert!((e - expect).norm() < 1e-15);
    }

    #[test]
    fn omega_entry_closed_form_value() {
        // sh(0.25)² / sh(1), 40-digit reference
        let e = omega_entry(c(1.0, 0.0), c(1.0, 0.0), 0.25, 0.75).unwrap();
        assert_relative_eq!(
            e.re,
            0.05429962371407515730612933803816389780593,
            epsilon = 1e-15
        );
        assert!(e.im.abs() < 1e-16);
    }

    #[test]
    fn shc_series_switch_is_seamless() {
        // adjacent arguments across the |w| = 1e-4 switch agree to rounding
        let above = shc(c(1.000000001e-4, 0.0));
        let below = shc(c(0.999999999e-4, 0.0));
        assert!((above - below).norm() < 1e-16);
        let above_i = shc(c(0.0, 1.000000001e-4));
        let below_i = shc(c(0.0, 0.999999999e-4));
        assert!((above_i - below_i).norm() < 1e-16);
    }

    #[test]
    fn quadratic_form_examples() {
        let s = SimplexPoint::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let xi = FrequencyTuple::new(vec![vec![1.0], vec![1.0]]).unwrap();
        let qf = quadratic_form(c(0.0, 0.0), c(1.0, 0.0), &s, &xi).unwrap();
        assert_relative_eq!(qf.re, 2.0 / 3.0, epsilon = 1e-15);

        // zero frequencies
        let xi0 = FrequencyTuple::new(vec![vec![0.0], vec![0.0]]).unwrap();
        let qf0 = quadratic_form(c(1.0, 0.0), c(0.5, 0.0), &s, &xi0).unwrap();
        assert!(qf0.norm() < 1e-16);

        // n = 1: t·s(1−s)ξ²
        let s1 = SimplexPoint::new(vec![0.4]).unwrap();
        let xi1 = FrequencyTuple::new(vec![vec![1.5]]).unwrap();
        let qf1 = quadratic_form(c(0.0, 0.0), c(2.0, 0.0), &s1, &xi1).unwrap();
        assert_relative_eq!(qf1.re, 2.0 * 0.4 * 0.6 * 2.25, epsilon = 1e-14);
    }

    #[test]
    fn spectral_oracle_matches_green_diagonal() {
        // n=1, z=0, s=1/2, ξ=1: (μ,μ)_0 = s(1−s) = 1/4
        let s = SimplexPoint::new(vec![0.5]).unwrap();
        let xi = FrequencyTuple::new(vec![vec![1.0]]).unwrap();
        let v = spectral_qf_oracle(c(0.0, 0.0), &s, &xi, 200_000).unwrap();
        assert_relative_eq!(v.re, 0.25, epsilon = 2e-6);
        assert!(v.im.abs() < 1e-18);
    }

    #[test]
    fn spectral_oracle_matches_quadratic_form_n2() {
        let s = SimplexPoint::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let xi = FrequencyTuple::new(vec![vec![1.0], vec![1.0]]).unwrap();
        // truncation tail is ~2/(π²M); 4·10⁵ modes bring it under 1e-6
        let v = spectral_qf_oracle(c(0.0, 0.0), &s, &xi, 400_000).unwrap();
        assert_relative_eq!(v.re, 2.0 / 3.0, epsilon = 1e-6);
        let v2 = spectral_qf_oracle(c(0.0, 0.0), &s, &xi, 800_000).unwrap();
        assert!((v2.re - 2.0 / 3.0).abs() < (v.re - 2.0 / 3.0).abs() + 1e-12);
    }

    #[test]
    fn spectral_oracle_rejects_outside_disk() {
        let s = SimplexPoint::new(vec![0.5]).unwrap();
        let xi = FrequencyTuple::new(vec![vec![1.0]]).unwrap();
        assert!(spectral_qf_oracle(c(3.2, 0.0), &s, &xi, 10).is_err());
    }

    #[test]
    fn quadratic_form_equals_t_times_spectral() {
        // Ω·ξ⊗ξ = t·(μ,μ)_{ωt} for |ωt| < π
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.random_range(1..=5usize);
            let mut sv: Vec<f64> = (0..n).map(|_| 0.05 + 0.9 * rng.random::<f64>()).collect();
            sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sv.dedup();
            if sv.len() != n {
                continue;
            }
            let s = SimplexPoint::new(sv).unwrap();
            let xi = FrequencyTuple::new(
                (0..n)
                    .map(|_| vec![2.0 * rng.random::<f64>() - 1.0])
                    .collect(),
            )
            .unwrap();
            let omega = c(0.9, 0.0);
            let t = c(0.3 + 0.4 * rng.random::<f64>(), 0.4 * rng.random::<f64>() - 0.2);
            let qf = quadratic_form(omega, t, &s, &xi).unwrap();
            let oracle = spectral_qf_oracle(omega * t, &s, &xi, 50_000).unwrap();
            let diff = (qf - t * oracle).norm();
            assert!(diff < 2e-4 * (1.0 + qf.norm()), "diff = {diff}");
        }
    }

    #[test]
    fn omega_entry_symmetry_and_reversal() {
        let omega = c(0.0, 1.3);
        let t = c(0.4, 0.2);
        let (sj, sk) = (0.21, 0.68);
        let a = omega_entry(omega, t, sj, sk).unwrap();
        let b = omega_entry(omega, t, sk, sj).unwrap();
        assert_eq!(a, b);

        // reversal: entry(s_j, s_k) = entry(1−s_k, 1−s_j)
        let r = omega_entry(omega, t, 1.0 - sk, 1.0 - sj).unwrap();
        assert!((a - r).norm() < 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn free_form_positivity_and_upper_bound() {
        // 0 ≤ Ω̄·ξ⊗ξ ≤ n Σ ξ_j² on random instances
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.random_range(1..=8usize);
            let mut sv: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sv.dedup();
            if sv.len() != n || sv[0] <= 0.0 || sv[n - 1] >= 1.0 {
                continue;
            }
            let s = SimplexPoint::new(sv).unwrap();
            let nu = rng.random_range(1..=3usize);
            let xi = FrequencyTuple::new(
                (0..n)
                    .map(|_| (0..nu).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect())
                    .collect(),
            )
            .unwrap();
            let qf = quadratic_form(c(0.0, 0.0), c(1.0, 0.0), &s, &xi).unwrap();
            assert!(qf.im.abs() < 1e-12);
            assert!(qf.re >= -1e-12);
            assert!(qf.re <= n as f64 * xi.sum_sq() + 1e-12);
        }
    }

    #[test]
    fn green_check_free_tent() {
        let g = green_residual(c(0.0, 0.0), 0.5, 1000).unwrap();
        assert!(g.boundary_error == 0.0);
        assert!(g.max_interior_residual < 1e-9); // piecewise linear kernel
        assert!(g.jump_error < 1e-9);
    }

    #[test]
    fn green_residual_second_order() {
        // grids coarse enough that the O(h²) residual dominates the
        // second-difference rounding floor
        let g1 = green_residual(c(1.0, 0.0), 0.3, 500).unwrap();
        let g2 = green_residual(c(1.0, 0.0), 0.3, 1000).unwrap();
        let ratio = g1.max_interior_residual / g2.max_interior_residual;
        assert!(ratio > 3.5 && ratio < 4.5, "ratio = {ratio}");
        assert!(g2.jump_error < 1e-6);
        assert!(g1.boundary_error == 0.0);
    }

    #[test]
    fn td_estimate_free_case_hits_ceiling() {
        let e = estimate_td(c(0.0, 0.0), 4, 500, 42).unwrap();
        assert!(e.hit_ceiling);
        assert_eq!(e.t_d, e.ceiling);
    }

    #[test]
    fn td_estimate_real_omega_regression() {
        // The sharp region of both properties reaches past the proof value
        // π/(√2|ω|): positivity holds up to the sh-pole (the eigenfunction
        // expansion of (μ,μ)_z has positive coefficients) and the factor-2
        // norm bound first fails near |ωt| ≈ 2.96. The sampler therefore
        // reports between those marks and the ceiling.
        let e = estimate_td(c(1.0, 0.0), 6, 2000, 42).unwrap();
        assert!(e.t_d > std::f64::consts::PI / 2f64.sqrt(), "t_d = {}", e.t_d);
        assert!(e.t_d <= e.ceiling);
        // regression baseline under the fixed seed
        assert!((e.t_d - 3.137468007005042).abs() < 1e-12, "t_d = {}", e.t_d);
        let e2 = estimate_td(c(1.0, 0.0), 6, 2000, 42).unwrap();
        assert_eq!(e.t_d, e2.t_d);

        // imaginary ω: resonances sit on the real-t axis and are found early
        let ei = estimate_td(c(0.0, 2.0), 6, 2000, 7).unwrap();
        assert!(ei.t_d > 1.0 && ei.t_d <= ei.ceiling, "t_d = {}", ei.t_d);
    }

    #[test]
    fn td_estimate_rejects_generic_complex_omega() {
        assert!(estimate_td(c(1.0, 1.0), 4, 10, 1).is_err());
    }
}
