//! The exact Poisson trace formula on the torus and its independent
//! plane-wave Galerkin oracle.
//!
//! Both sides of the identity are computed from scratch: `trace_direct` sums
//! e^{−λ_n t} over the Hermitian eigenproblem of −∂² − c, while
//! `poisson_trace` periodizes the free-space kernel, Laplace-resumming the
//! Borel data ŵ(q,τ) = ∫ Tr v̂(τ, x, x+q) dx per lattice vector q.

use crate::borel::{kernel_k, laplace_grid, LaplaceOptions};
use crate::error::{Error, Result};
use crate::linalg::principal_pow_neg_half;
use crate::measures::{measure_from_fourier_coeffs, DiscreteMeasure, TorusPotential};
use crate::quad::SimplexRule;
use crate::series::{atom_gram, effective_order, tuple_weight, DeformationConfig, TupleIter};
use crate::{lit, C, Scalar};
use nalgebra::{ComplexField, DMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sorted plane-wave Galerkin spectrum of H = −∂² − c on the torus.
#[derive(Debug, Clone)]
pub struct TorusSpectrum<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub cutoff: i64,
    pub d: usize,
    pub nu: usize,
    /// Σ_q |c_q|, an upper bound for ‖c‖_∞ used in tail estimates.
    pub potential_sup_bound: T,
}

fn lattice_box(nu: usize, cutoff: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..nu {
        let mut next = Vec::new();
        for partial in &out {
            for k in -cutoff..=cutoff {
                let mut p = partial.clone();
                p.push(k);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Assemble and diagonalize the Hermitian block matrix
/// `H[k,k'] = 4π² k² δ_{kk'} 𝟙_d − c_{k−k'}` over k ∈ {−cutoff..cutoff}^ν.
pub fn galerkin_spectrum<T: Scalar>(p: &TorusPotential<T>, cutoff: i64) -> Result<TorusSpectrum<T>> {
    if cutoff < p.max_q() {
        return Err(Error::domain(
            "cutoff must cover the potential's Fourier support",
        ));
    }
    let nu = p.nu();
    let d = p.d();
    let modes = lattice_box(nu, cutoff);
    let side = d * modes.len();
    let four_pi2 = lit::<T>(4.0) * T::pi() * T::pi();

    let mut h = DMatrix::<C<T>>::zeros(side, side);
    for (bi, ki) in modes.iter().enumerate() {
        let k2: i64 = ki.iter().map(|&v| v * v).sum();
        let diag = four_pi2 * lit::<T>(k2 as f64);
        for a in 0..d {
            h[(bi * d + a, bi * d + a)] = C::new(diag, T::zero());
        }
        for (bj, kj) in modes.iter().enumerate() {
            let dq: Vec<i64> = ki.iter().zip(kj.iter()).map(|(a, b)| a - b).collect();
            if let Some((_, cq)) = p.coeffs().iter().find(|(q, _)| *q == dq) {
                for a in 0..d {
                    for b in 0..d {
                        h[(bi * d + a, bj * d + b)] -= cq[(a, b)];
                    }
                }
            }
        }
    }
    let defect = crate::linalg::hermitian_defect(&h);
    if defect > lit::<T>(1e-10) {
        return Err(Error::domain("assembled Galerkin matrix is not Hermitian"));
    }
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut eigenvalues: Vec<T> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(TorusSpectrum {
        eigenvalues,
        cutoff,
        d,
        nu,
        potential_sup_bound: p.sup_norm_bound(),
    })
}

/// Spectral-side trace with an explicit bound on the dropped modes.
#[derive(Debug, Clone)]
pub struct TraceValue<T: Scalar> {
    pub value: C<T>,
    /// d·e^{‖c‖_∞ Re t}·Σ_{|k|_∞ > cutoff} e^{−4π²k² Re t}
    pub tail_bound: T,
    pub tail_warning: bool,
}

/// Σ_n e^{−λ_n t} over the computed eigenvalues, Re t > 0.
pub fn trace_direct<T: Scalar>(spec: &TorusSpectrum<T>, t: C<T>, tol: T) -> Result<TraceValue<T>> {
    if !(t.re > T::zero()) {
        return Err(Error::domain("trace requires Re t > 0"));
    }
    let mut value = C::new(T::zero(), T::zero());
    for &l in &spec.eigenvalues {
        value += (-t.scale(l)).exp();
    }
    // untruncated vs truncated one-dimensional theta factors
    let re_t = t.re;
    let four_pi2 = lit::<T>(4.0) * T::pi() * T::pi();
    let theta_1d = |k_max: Option<i64>| -> T {
        let mut acc = T::one();
        let mut k = 1i64;
        loop {
            if let Some(km) = k_max {
                if k > km {
                    break;
                }
            }
            let term = (-four_pi2 * lit::<T>((k * k) as f64) * re_t).exp();
            acc += term + term;
            if term < lit::<T>(1e-300) {
                break;
            }
            k += 1;
        }
        acc
    };
    let full = theta_1d(None);
    let boxed = theta_1d(Some(spec.cutoff));
    let mut full_pow = T::one();
    let mut boxed_pow = T::one();
    for _ in 0..spec.nu {
        full_pow *= full;
        boxed_pow *= boxed;
    }
    let tail_bound = lit::<T>(spec.d as f64)
        * (spec.potential_sup_bound * re_t).exp()
        * (full_pow - boxed_pow).max(T::zero());
    Ok(TraceValue {
        value,
        tail_bound,
        tail_warning: tail_bound > tol,
    })
}

// --- ŵ(q,τ) ------------------------------------------------------------------

/// Trapezoid factor `(1/N^ν) Σ_i e^{i x_i·Ξ}` over the uniform x-grid.
/// For frequencies Ξ = 2π m with integer m (the torus measures) this is the
/// exact Kronecker value δ_{m ≡ 0 mod N}; other frequencies fall back to the
/// literal sum.
fn trapezoid_factor<T: Scalar>(xi_total: &[T], n_points: usize) -> C<T> {
    let two_pi = lit::<T>(2.0) * T::pi();
    let mut out = C::new(T::one(), T::zero());
    for &xi in xi_total {
        let m = (xi / two_pi).round();
        if (xi - m * two_pi).abs() < lit::<T>(1e-9) {
            let mi = m.to_f64() as i64;
            if mi.rem_euclid(n_points as i64) != 0 {
                return C::new(T::zero(), T::zero());
            }
            // exact factor 1 on this axis
        } else {
            let mut axis = C::new(T::zero(), T::zero());
            for i in 0..n_points {
                let x = lit::<T>(i as f64 / n_points as f64);
                axis += C::new(T::zero(), x * xi).exp();
            }
            out *= axis.unscale(lit::<T>(n_points as f64));
        }
    }
    out
}

/// Literal implementation of `ŵ(q,τ) = ∫ Tr v̂(τ, x, x+q) dx` by the uniform
/// trapezoid rule (exact for the trigonometric-polynomial integrand).
/// Reference path for tests and small grids; `WHatEvaluator` is the
/// algebraically identical factorized form.
pub fn w_hat<T: Scalar>(
    q: &[i64],
    tau: C<T>,
    cfg: &DeformationConfig<T>,
    x_quad_points: usize,
) -> Result<C<T>> {
    if q.len() != cfg.measure.nu() {
        return Err(Error::config("lattice vector dimension mismatch"));
    }
    if x_quad_points == 0 {
        return Err(Error::config("x quadrature needs at least one point"));
    }
    let nu = cfg.measure.nu();
    let grid = lattice_grid_points::<T>(nu, x_quad_points);
    let mut acc = C::new(T::zero(), T::zero());
    for x in &grid {
        let y: Vec<C<T>> = x
            .iter()
            .zip(q.iter())
            .map(|(&xv, &qv)| xv + C::new(lit::<T>(qv as f64), T::zero()))
            .collect();
        let v = crate::borel::borel_v(tau, x, &y, cfg)?;
        let mut tr = C::new(T::zero(), T::zero());
        for i in 0..v.nrows() {
            tr += v[(i, i)];
        }
        acc += tr;
    }
    Ok(acc.unscale(lit::<T>(grid.len() as f64)))
}

fn lattice_grid_points<T: Scalar>(nu: usize, n: usize) -> Vec<Vec<C<T>>> {
    let mut out: Vec<Vec<C<T>>> = vec![vec![]];
    for _ in 0..nu {
        let mut next = Vec::new();
        for partial in &out {
            for i in 0..n {
                let mut p = partial.clone();
                p.push(C::new(lit::<T>(i as f64 / n as f64), T::zero()));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

struct WHatEntry<T: Scalar> {
    /// Ω̄·ξ⊗ξ at the node (real, nonnegative in the free case).
    b: T,
    /// e^{2πi D_a} per axis, D = Σ_k (1−s_k) m_{j_k}; powers give the q-phase.
    axis_phase: Vec<C<T>>,
    /// node weight × Tr(M_J) × trapezoid factor
    coeff: C<T>,
}

/// Factorized ŵ evaluator: per series order n, the surviving atom tuples and
/// simplex nodes are precomputed once; each (q, τ) evaluation reuses the
/// K_n values across all q.
pub struct WHatEvaluator<T: Scalar> {
    cfg: DeformationConfig<T>,
    terms: Vec<(usize, Vec<WHatEntry<T>>)>,
    /// growth constant of the real-axis bound |ŵ(q,τ) − d| ≤ d e^{C√τ}
    pub growth_c: T,
    pub x_quad_points: usize,
}

impl<T: Scalar> WHatEvaluator<T> {
    /// `tau_max_hint` fixes the per-term quadrature orders (they grow with
    /// the Bessel oscillation √(B|τ|)); evaluations beyond the hint lose
    /// accuracy gracefully rather than re-deriving geometry.
    pub fn new(
        cfg: DeformationConfig<T>,
        x_quad_points: usize,
        tau_max_hint: T,
    ) -> Result<Self> {
        if cfg.omega != C::new(T::zero(), T::zero()) {
            return Err(Error::domain("the Borel trace requires omega = 0"));
        }
        let measure = &cfg.measure;
        let atoms = measure.atoms();
        let nu = measure.nu();
        let gram = atom_gram(measure);
        let two_pi = lit::<T>(2.0) * T::pi();

        let mut terms = Vec::new();
        for n in 1..=cfg.n_max {
            if atoms.is_empty() {
                break;
            }
            let order = borel_trace_order(&cfg, n, tau_max_hint)?;
            let rule = SimplexRule::<T>::new(n, order);
            let mut entries: Vec<WHatEntry<T>> = Vec::new();
            for idx in TupleIter::new(n, atoms.len()) {
                // selection by the exact x-average of e^{i x·Ξ}
                let mut xi_total = vec![T::zero(); nu];
                for &j in &idx {
                    for (a, v) in xi_total.iter_mut().zip(&atoms[j].xi) {
                        *a += *v;
                    }
                }
                let tx = trapezoid_factor(&xi_total, x_quad_points);
                if tx.modulus() < lit::<T>(1e-14) {
                    continue;
                }
                let w_mat = tuple_weight(measure, &idx);
                let mut tr = C::new(T::zero(), T::zero());
                for i in 0..w_mat.nrows() {
                    tr += w_mat[(i, i)];
                }
                let tr_tx = tr * tx;
                if tr_tx.modulus() == T::zero() {
                    continue;
                }
                rule.for_each(|s, w| {
                    let factors = crate::defmatrix::OmegaFactors::new(
                        C::new(T::zero(), T::zero()),
                        C::new(T::one(), T::zero()),
                        s,
                    )
                    .expect("free-case factors cannot hit a pole");
                    let mut b = C::new(T::zero(), T::zero());
                    for k in 0..n {
                        b += factors.pm(k, k).scale(gram[(idx[k], idx[k])]);
                        for l in (k + 1)..n {
                            b += factors.pm(k, l).scale(lit::<T>(2.0) * gram[(idx[k], idx[l])]);
                        }
                    }
                    let mut dvec = vec![T::zero(); nu];
                    for (k, &j) in idx.iter().enumerate() {
                        let c1 = T::one() - s[k];
                        for (a, v) in dvec.iter_mut().zip(&atoms[j].xi) {
                            *a += c1 * *v / two_pi; // back to integer-lattice units
                        }
                    }
                    let axis_phase = dvec
                        .iter()
                        .map(|&dv| C::new(T::zero(), two_pi * dv).exp())
                        .collect();
                    entries.push(WHatEntry {
                        b: b.re,
                        axis_phase,
                        coeff: tr_tx.scale(w),
                    });
                });
            }
            terms.push((n, entries));
        }
        let a0 = measure.exp_moment(T::zero(), T::zero());
        let growth_c = lit::<T>(2.0) * a0.sqrt();
        Ok(WHatEvaluator {
            cfg,
            terms,
            growth_c,
            x_quad_points,
        })
    }

    pub fn d(&self) -> usize {
        self.cfg.measure.d()
    }

    /// ŵ at a batch of lattice vectors, sharing the K_n evaluations.
    pub fn eval_many(&self, qs: &[Vec<i64>], tau: C<T>) -> Vec<C<T>> {
        let d = lit::<T>(self.cfg.measure.d() as f64);
        let mut out = vec![C::new(d, T::zero()); qs.len()];
        for (n, entries) in &self.terms {
            for e in entries {
                let k = kernel_k(*n, C::new(e.b, T::zero()), tau) * e.coeff;
                for (qi, q) in qs.iter().enumerate() {
                    let mut phase = C::new(T::one(), T::zero());
                    for (axis, &qa) in e.axis_phase.iter().zip(q.iter()) {
                        phase *= powi_c(*axis, qa);
                    }
                    out[qi] += k * phase;
                }
            }
        }
        out
    }

    pub fn eval(&self, q: &[i64], tau: C<T>) -> C<T> {
        self.eval_many(&[q.to_vec()], tau)[0]
    }
}

fn powi_c<T: Scalar>(z: C<T>, p: i64) -> C<T> {
    let mut base = if p >= 0 { z } else { z.conjugate() }; // |z| = 1 phases
    let mut k = p.unsigned_abs();
    let mut acc = C::new(T::one(), T::zero());
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// Per-axis order of the trace geometry (same oscillation scaling as the
/// pointwise Borel evaluator).
fn borel_trace_order<T: Scalar>(cfg: &DeformationConfig<T>, n: usize, tau_abs: T) -> Result<usize> {
    let m = cfg.measure.max_xi_norm() * lit::<T>(n as f64);
    let b_cap = m * m * lit::<T>(0.25);
    let swing = (b_cap * tau_abs).sqrt().to_f64();
    let boost = if swing > 0.0 {
        (swing / n as f64).ceil() as usize + 8
    } else {
        0
    };
    effective_order(
        n,
        cfg.measure.atoms().len().max(1),
        cfg.quad_order.max(boost),
        cfg.cost_cap,
    )
}

/// One lattice term of the Poisson side: ŵ(q,·) sampled on a τ-grid, with
/// the parabolic bound data alongside.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoissonTerm {
    pub q: Vec<i64>,
    pub tau_grid: Vec<f64>,
    pub w_hat_re: Vec<f64>,
    pub w_hat_im: Vec<f64>,
}

/// Poisson-side trace value with its lattice-tail estimate.
#[derive(Debug, Clone)]
pub struct PoissonTrace<T: Scalar> {
    pub value: C<T>,
    pub q_max: i64,
    pub lattice_tail: T,
    pub tail_warning: bool,
}

/// `(4πt)^{−ν/2} Σ_{|q|_∞ ≤ Q} e^{−q²/4t} ∫_0^∞ e^{−τ/t} ŵ(q,τ) dτ/t`.
/// `q_max = None` picks the smallest Q with exp(−Q²/(4|t|)) < tol/10.
pub fn poisson_trace<T: Scalar>(
    t: C<T>,
    cfg: &DeformationConfig<T>,
    q_max: Option<i64>,
    tol: T,
) -> Result<PoissonTrace<T>> {
    if !(t.re > T::zero()) {
        return Err(Error::domain("poisson trace requires Re t > 0"));
    }
    let nu = cfg.measure.nu();
    let inv_t = C::new(T::one(), T::zero()) / t;
    let a = inv_t.re;

    let q_cap = match q_max {
        Some(q) => q,
        None => {
            let mut q = 1i64;
            loop {
                let arg = -lit::<T>((q * q) as f64) / (lit::<T>(4.0) * t.modulus());
                if arg.exp() < tol / lit::<T>(10.0) {
                    break q;
                }
                q += 1;
                if q > 64 {
                    return Err(Error::ToleranceNotMet(
                        "lattice cutoff exceeded 64 before reaching the tolerance".into(),
                    ));
                }
            }
        }
    };

    // shared τ-grid for every lattice vector
    let opts = LaplaceOptions {
        tol: tol / lit::<T>(10.0),
        ..LaplaceOptions::default()
    };
    let eval = WHatEvaluator::new(cfg.clone(), default_x_points(cfg), {
        // grid extent depends only on the growth constant and Re(1/t)
        let probe = laplace_grid(lit::<T>(2.0) * cfg.measure.exp_moment(T::zero(), T::zero()).sqrt(), a, &opts)?;
        probe.last().map(|p| p.0).unwrap_or(T::one())
    })?;
    let grid = laplace_grid(eval.growth_c, a, &opts)?;

    let qs = lattice_box(nu, q_cap);
    let per_node: Vec<Vec<C<T>>> = grid
        .par_iter()
        .map(|&(tau, _)| eval.eval_many(&qs, C::new(tau, T::zero())))
        .collect();

    let mut l_values = vec![C::new(T::zero(), T::zero()); qs.len()];
    let mut l_bound = T::zero();
    for ((tau, w), vals) in grid.iter().zip(per_node.iter()) {
        let damp = (-C::new(*tau, T::zero()) * inv_t).exp().scale(*w);
        for (acc, v) in l_values.iter_mut().zip(vals.iter()) {
            *acc += *v * damp;
        }
        // uniform bound d(1 + e^{C√τ}) e^{−aτ} on the resummed amplitude
        l_bound += *w
            * (T::one() + (eval.growth_c * tau.sqrt()).exp())
            * (-*tau * a).exp()
            * lit::<T>(cfg.measure.d() as f64);
    }
    l_bound /= t.modulus();

    let pref = principal_pow_neg_half(t.scale(lit::<T>(4.0) * T::pi()), nu);
    let quarter_inv_t = inv_t.scale(lit::<T>(0.25));
    let mut value = C::new(T::zero(), T::zero());
    for (q, l) in qs.iter().zip(l_values.iter()) {
        let q2: i64 = q.iter().map(|&v| v * v).sum();
        let gauss = (-quarter_inv_t.scale(lit::<T>(q2 as f64))).exp();
        value += gauss * *l * inv_t;
    }
    value *= pref;

    // lattice tail: Σ_{|q|_∞ > Q} e^{−q² a/4} × sup|L_q| × |pref|
    let b = a * lit::<T>(0.25);
    let theta_1d = |k_cap: Option<i64>| -> T {
        let mut acc = T::one();
        let mut k = 1i64;
        loop {
            if let Some(kc) = k_cap {
                if k > kc {
                    break;
                }
            }
            let term = (-b * lit::<T>((k * k) as f64)).exp();
            acc += term + term;
            if term < lit::<T>(1e-300) {
                break;
            }
            k += 1;
        }
        acc
    };
    let full = theta_1d(None);
    let boxed = theta_1d(Some(q_cap));
    let mut full_pow = T::one();
    let mut boxed_pow = T::one();
    for _ in 0..nu {
        full_pow *= full;
        boxed_pow *= boxed;
    }
    let lattice_tail = (full_pow - boxed_pow).max(T::zero()) * l_bound * pref.modulus();

    Ok(PoissonTrace {
        value,
        q_max: q_cap,
        lattice_tail,
        tail_warning: lattice_tail > tol,
    })
}

/// Uniform x-grid size (2·cutoff+1)-style default: enough points to resolve
/// every frequency sum the truncated series can produce.
fn default_x_points<T: Scalar>(cfg: &DeformationConfig<T>) -> usize {
    let two_pi = 2.0 * std::f64::consts::PI;
    let max_m = (cfg.measure.max_xi_norm().to_f64() / two_pi).ceil() as usize;
    2 * (cfg.n_max * max_m.max(1)) + 1
}

/// ŵ(q,·) sampled on the Laplace grid for reporting.
pub fn poisson_terms<T: Scalar>(
    eval: &WHatEvaluator<T>,
    qs: &[Vec<i64>],
    taus: &[T],
) -> Vec<PoissonTerm> {
    let mut terms: Vec<PoissonTerm> = qs
        .iter()
        .map(|q| PoissonTerm {
            q: q.clone(),
            tau_grid: taus.iter().map(|t| t.to_f64()).collect(),
            w_hat_re: Vec::with_capacity(taus.len()),
            w_hat_im: Vec::with_capacity(taus.len()),
        })
        .collect();
    for &tau in taus {
        let vals = eval.eval_many(qs, C::new(tau, T::zero()));
        for (term, v) in terms.iter_mut().zip(vals.iter()) {
            term.w_hat_re.push(v.re.to_f64());
            term.w_hat_im.push(v.im.to_f64());
        }
    }
    terms
}

/// Convenience: deformation config for a torus potential (free case),
/// honoring the spec's μ = Σ c_q δ_{2πq} correspondence.
pub fn torus_config<T: Scalar>(
    p: &TorusPotential<T>,
    n_max: usize,
    quad_order: usize,
) -> Result<DeformationConfig<T>> {
    let m: DiscreteMeasure<T> = measure_from_fourier_coeffs(p)?;
    DeformationConfig::new(m, C::new(T::zero(), T::zero()), n_max, quad_order)
}
