//! The deformation series v = 𝟙 + Σ_{n≥1} v_n and the full kernel u = u_ω v,
//! with explicit truncation control.
//!
//! Every term is a sum over ordered atom tuples of simplex integrals,
//!   v_n = t^n Σ_J [∫ e^{−Ω·ξ⊗ξ} e^{i Σ_k q_ω(s_k)·ξ_{j_k}} ds] · M_{j_n}⋯M_{j_1},
//! with the matrix weights multiplied in time order. The same tuple/simplex
//! walk backs the Borel-plane evaluator and the Taylor/remainder splits, so
//! they all share `simplex_tuple_sum`.

use crate::defmatrix::OmegaFactors;
use crate::error::{Error, Result};
use crate::linalg::{bilinear_dot_real, cnorm, identity, op_norm};
use crate::measures::DiscreteMeasure;
use crate::mehler::{self, mehler_kernel, KernelPoint, DELTA_PATH};
use crate::quad::SimplexRule;
use crate::{lit, C, CMatrix, Scalar};
use nalgebra::{ComplexField, DMatrix};

/// Evaluation parameters for the deformation series.
#[derive(Debug, Clone)]
pub struct DeformationConfig<T: Scalar> {
    pub measure: DiscreteMeasure<T>,
    pub omega: C<T>,
    pub n_max: usize,
    /// Per-axis quadrature order for the simplex integrals; high-n terms are
    /// automatically throttled by `cost_cap`.
    pub quad_order: usize,
    /// Working radius T_c of the t-half-disk; +∞ in the free case.
    pub t_domain_radius: T,
    /// Splitting parameter ε of the moment integrals behind growth constants.
    pub eps: T,
    /// Cap on tuples × quadrature nodes per series term.
    pub cost_cap: u128,
    /// Tail bounds above this value raise the truncation warning flag.
    pub series_tol: T,
}

impl<T: Scalar> DeformationConfig<T> {
    pub fn new(
        measure: DiscreteMeasure<T>,
        omega: C<T>,
        n_max: usize,
        quad_order: usize,
    ) -> Result<Self> {
        if quad_order < 1 {
            return Err(Error::config("quad_order must be >= 1"));
        }
        let abs_om = omega.modulus();
        if abs_om > T::zero() {
            let min_part = if omega.re.abs() < omega.im.abs() {
                omega.re.abs()
            } else {
                omega.im.abs()
            };
            if min_part > lit::<T>(1e-12) * abs_om {
                return Err(Error::config("omega must be real or purely imaginary"));
            }
        }
        let t_domain_radius = if abs_om == T::zero() {
            lit::<T>(f64::INFINITY)
        } else {
            // T_c = min(T_d, δ/|ω|); the path bound δ/|ω| is the binding one
            // since the growth region of Ω extends past π/(√2|ω|).
            lit::<T>(DELTA_PATH) / abs_om
        };
        Ok(DeformationConfig {
            measure,
            omega,
            n_max,
            quad_order,
            t_domain_radius,
            eps: T::one(),
            cost_cap: 40_000_000,
            series_tol: lit::<T>(1e-10),
        })
    }

    pub fn with_t_domain_radius(mut self, r: T) -> Self {
        self.t_domain_radius = r;
        self
    }

    pub fn with_cost_cap(mut self, cap: u128) -> Self {
        self.cost_cap = cap;
        self
    }

    pub fn with_eps(mut self, eps: T) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_series_tol(mut self, tol: T) -> Self {
        self.series_tol = tol;
        self
    }

    fn check_t(&self, t: C<T>) -> Result<()> {
        if t == C::new(T::zero(), T::zero()) {
            return Err(Error::domain("t must be nonzero"));
        }
        if t.re < T::zero() {
            return Err(Error::domain("Re t must be nonnegative"));
        }
        if !(t.modulus() < self.t_domain_radius) {
            return Err(Error::domain(format!(
                "|t| must stay below the working radius T_c = {:?}",
                self.t_domain_radius.to_f64()
            )));
        }
        Ok(())
    }
}

/// Value of a truncated series together with its truncation metadata.
#[derive(Debug, Clone)]
pub struct SeriesResult<T: Scalar> {
    pub value: CMatrix<T>,
    /// ‖v_n‖ for n = 1..n_max.
    pub per_term_norms: Vec<T>,
    /// Σ_{n>n_max} (|t|A)^n/n! with A = exp_moment(μ, 0, 4R), R = max(|x|,|y|).
    pub tail_bound: T,
    /// tail_bound exceeded the configured tolerance.
    pub tail_warning: bool,
    /// Per-axis quadrature order actually used for each term.
    pub quad_orders: Vec<usize>,
}

/// Iterate all `atoms^n` index tuples in lexicographic order.
pub(crate) struct TupleIter {
    idx: Vec<usize>,
    atoms: usize,
    done: bool,
}

impl TupleIter {
    pub(crate) fn new(n: usize, atoms: usize) -> Self {
        TupleIter {
            idx: vec![0; n],
            atoms,
            done: atoms == 0,
        }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let mut k = 0;
        loop {
            if k == self.idx.len() {
                self.done = true;
                break;
            }
            self.idx[k] += 1;
            if self.idx[k] < self.atoms {
                break;
            }
            self.idx[k] = 0;
            k += 1;
        }
        Some(out)
    }
}

/// Time-ordered weight product M_{j_n}⋯M_{j_1} for a tuple of atom indices.
pub(crate) fn tuple_weight<T: Scalar>(measure: &DiscreteMeasure<T>, idx: &[usize]) -> CMatrix<T> {
    let d = measure.d();
    let mut w = identity::<T>(d);
    for &j in idx.iter().rev() {
        w *= &measure.atoms()[j].weight;
    }
    w
}

/// Atom-level Gram matrix ξ_a·ξ_b.
pub(crate) fn atom_gram<T: Scalar>(measure: &DiscreteMeasure<T>) -> DMatrix<T> {
    let m = measure.atoms().len();
    DMatrix::from_fn(m, m, |a, b| {
        crate::linalg::dot_real(&measure.atoms()[a].xi, &measure.atoms()[b].xi)
    })
}

/// Quadratic form of `OmegaFactors` against a tuple through the atom Gram.
fn qf_tuple<T: Scalar>(f: &OmegaFactors<T>, idx: &[usize], gram: &DMatrix<T>) -> C<T> {
    let n = idx.len();
    let mut acc = C::new(T::zero(), T::zero());
    for k in 0..n {
        acc += f.pm(k, k).scale(gram[(idx[k], idx[k])]);
        for l in (k + 1)..n {
            acc += f.pm(k, l).scale(lit::<T>(2.0) * gram[(idx[k], idx[l])]);
        }
    }
    acc * f.scale()
}

/// Per-axis order for the n-th term under the cost cap.
pub(crate) fn effective_order(
    n: usize,
    atoms: usize,
    quad_order: usize,
    cost_cap: u128,
) -> Result<usize> {
    let tuples = (atoms as f64).powi(n as i32);
    let budget = (cost_cap as f64) / tuples;
    if budget < 1.0 {
        return Err(Error::CostExceeded {
            estimate: tuples as u128,
            cap: cost_cap,
        });
    }
    let q = budget.powf(1.0 / n as f64).floor() as usize;
    Ok(quad_order.min(q.max(1)))
}

/// Core walk: Σ_J [∫_{0<s_1<⋯<s_n<1} f(Ω·ξ_J⊗ξ_J, q_ω^n(s)·ξ_J) ds] · M_J
/// over all atom tuples J, at fixed (ω, t_omega) and endpoints (x, y).
///
/// `t_omega` is the t used inside Ω and the paths; the caller applies any
/// outer t^n factor. The Borel evaluator calls this with ω = 0, t_omega = 1
/// so the form argument becomes Ω̄·ξ⊗ξ.
pub(crate) fn simplex_tuple_sum<T: Scalar>(
    measure: &DiscreteMeasure<T>,
    omega: C<T>,
    t_omega: C<T>,
    x: &[C<T>],
    y: &[C<T>],
    n: usize,
    order: usize,
    f: &dyn Fn(C<T>, C<T>) -> C<T>,
) -> Result<CMatrix<T>> {
    let d = measure.d();
    let atoms = measure.atoms();
    if atoms.is_empty() || n == 0 {
        return Ok(CMatrix::<T>::zeros(d, d));
    }
    let z = omega * t_omega;

    let gram = atom_gram(measure);
    let px: Vec<C<T>> = atoms.iter().map(|a| bilinear_dot_real(&a.xi, x)).collect();
    let py: Vec<C<T>> = atoms.iter().map(|a| bilinear_dot_real(&a.xi, y)).collect();
    let tuples: Vec<Vec<usize>> = TupleIter::new(n, atoms.len()).collect();
    let weights: Vec<CMatrix<T>> = tuples.iter().map(|j| tuple_weight(measure, j)).collect();

    let rule = SimplexRule::<T>::new(n, order);
    let mut acc = vec![C::new(T::zero(), T::zero()); tuples.len()];
    let mut path_a = vec![C::new(T::zero(), T::zero()); n];
    let mut path_b = vec![C::new(T::zero(), T::zero()); n];
    let mut factors_err = None;
    rule.for_each(|s, w| {
        if factors_err.is_some() {
            return;
        }
        let factors = match OmegaFactors::new(omega, t_omega, s) {
            Ok(fa) => fa,
            Err(e) => {
                factors_err = Some(e);
                return;
            }
        };
        for k in 0..n {
            let (a, b) = mehler::path_coefficients(z, s[k]);
            path_a[k] = a;
            path_b[k] = b;
        }
        for (j, idx) in tuples.iter().enumerate() {
            let qf = qf_tuple(&factors, idx, &gram);
            let mut phase = C::new(T::zero(), T::zero());
            for (k, &a) in idx.iter().enumerate() {
                phase += path_a[k] * px[a] + path_b[k] * py[a];
            }
            acc[j] += f(qf, phase).scale(w);
        }
    });
    if let Some(e) = factors_err {
        return Err(e);
    }

    let mut out = CMatrix::<T>::zeros(d, d);
    for (a, wm) in acc.iter().zip(weights.iter()) {
        out += wm.map(|m| m * *a);
    }
    Ok(out)
}

fn pow_n<T: Scalar>(t: C<T>, n: usize) -> C<T> {
    let mut p = C::new(T::one(), T::zero());
    for _ in 0..n {
        p *= t;
    }
    p
}

/// n-th series term
/// `v_n = t^n Σ_J ∫ e^{−Ω·ξ⊗ξ + i q_ω^n(s)·ξ} ds · M_J`.
pub fn v_term<T: Scalar>(
    n: usize,
    t: C<T>,
    x: &[C<T>],
    y: &[C<T>],
    cfg: &DeformationConfig<T>,
) -> Result<CMatrix<T>> {
    if n == 0 || n > cfg.n_max {
        return Err(Error::domain("term index must satisfy 1 <= n <= n_max"));
    }
    cfg.check_t(t)?;
    let order = effective_order(n, cfg.measure.atoms().len().max(1), cfg.quad_order, cfg.cost_cap)?;
    let sum = simplex_tuple_sum(
        &cfg.measure,
        cfg.omega,
        t,
        x,
        y,
        n,
        order,
        &|qf, phase| (-qf + phase * C::i()).exp(),
    )?;
    Ok(sum.map(|m| m * pow_n(t, n)))
}

/// Σ_{k>n_max} x^k/k! computed by the term recurrence.
pub(crate) fn exp_tail<T: Scalar>(x: T, n_max: usize) -> T {
    if x == T::zero() {
        return T::zero();
    }
    let mut term = T::one();
    for k in 1..=(n_max + 1) {
        term *= x / lit::<T>(k as f64);
        if !term.is_finite() {
            return term; // bound overflowed: report +∞ honestly
        }
    }
    let mut acc = term;
    let mut k = n_max + 2;
    loop {
        term *= x / lit::<T>(k as f64);
        acc += term;
        if term <= acc * lit::<T>(1e-18) || k > n_max + 10_000 {
            break;
        }
        k += 1;
    }
    acc
}

/// Truncated series 𝟙 + Σ_{n≤n_max} v_n with the factorial tail bound.
pub fn v_sum<T: Scalar>(
    t: C<T>,
    x: &[C<T>],
    y: &[C<T>],
    cfg: &DeformationConfig<T>,
) -> Result<SeriesResult<T>> {
    cfg.check_t(t)?;
    let d = cfg.measure.d();
    let mut value = identity::<T>(d);
    let mut per_term_norms = Vec::with_capacity(cfg.n_max);
    let mut quad_orders = Vec::with_capacity(cfg.n_max);
    for n in 1..=cfg.n_max {
        let order =
            effective_order(n, cfg.measure.atoms().len().max(1), cfg.quad_order, cfg.cost_cap)?;
        quad_orders.push(order);
        let term = v_term(n, t, x, y, cfg)?;
        per_term_norms.push(op_norm(&term));
        value += term;
    }
    let r = {
        let nx = cnorm(x);
        let ny = cnorm(y);
        if nx > ny {
            nx
        } else {
            ny
        }
    };
    let a = cfg.measure.exp_moment(T::zero(), lit::<T>(4.0) * r);
    let tail_bound = exp_tail(t.modulus() * a, cfg.n_max);
    Ok(SeriesResult {
        value,
        per_term_norms,
        tail_bound,
        tail_warning: tail_bound > cfg.series_tol,
        quad_orders,
    })
}

/// Full kernel u = u_ω · v (scalar Mehler factor times the matrix series).
pub fn heat_kernel<T: Scalar>(
    t: C<T>,
    x: &[C<T>],
    y: &[C<T>],
    cfg: &DeformationConfig<T>,
) -> Result<CMatrix<T>> {
    let point = KernelPoint::new(t, x.to_vec(), y.to_vec(), cfg.omega)?;
    let u = mehler_kernel(&point);
    let v = v_sum(t, x, y, cfg)?;
    Ok(v.value.map(|m| m * u))
}

/// Coefficients a_0..a_{r-1} of the small-t expansion and the remainders
/// R_r(t) = v(t) − Σ_{q<r} a_q t^q at the requested samples.
#[derive(Debug, Clone)]
pub struct TaylorData<T: Scalar> {
    pub coeffs: Vec<CMatrix<T>>,
    pub remainders: Vec<CMatrix<T>>,
    /// Fit matrix condition number exceeded 1e10 (harmonic route only).
    pub condition_warning: bool,
}

/// Exact free-case coefficients
/// `a_q = Σ_{n=1..q} (1/(q−n)!) Σ_J ∫ (−Ω̄·ξ⊗ξ)^{q−n} e^{i q_0^n(s)·ξ} ds · M_J`
/// (a_0 = 𝟙), the τ-Taylor coefficients of the Borel transform times r!.
pub fn free_taylor_coeffs<T: Scalar>(
    count: usize,
    x: &[C<T>],
    y: &[C<T>],
    cfg: &DeformationConfig<T>,
) -> Result<Vec<CMatrix<T>>> {
    if cfg.omega != C::new(T::zero(), T::zero()) {
        return Err(Error::domain("exact coefficient route requires omega = 0"));
    }
    if count > cfg.n_max + 1 {
        return Err(Error::domain(
            "coefficient order exceeds n_max; raise n_max to cover all tuple depths",
        ));
    }
    let d = cfg.measure.d();
    let atoms = cfg.measure.atoms().len().max(1);
    let mut coeffs = vec![identity::<T>(d)];
    let one = C::new(T::one(), T::zero());
    for q in 1..count {
        let mut aq = CMatrix::<T>::zeros(d, d);
        for n in 1..=q {
            let m = q - n;
            // polynomial degree 2m per axis plus the analytic phase
            let order = effective_order(
                n,
                atoms,
                cfg.quad_order.max(m + 2),
                cfg.cost_cap,
            )?;
            let mut inv_mfact = T::one();
            for k in 1..=m {
                inv_mfact /= lit::<T>(k as f64);
            }
            let term = simplex_tuple_sum(
                &cfg.measure,
                C::new(T::zero(), T::zero()),
                one,
                x,
                y,
                n,
                order,
                &|qf, phase| pow_n(-qf, m).scale(inv_mfact) * (phase * C::i()).exp(),
            )?;
            aq += term;
        }
        coeffs.push(aq);
    }
    Ok(coeffs)
}

/// Harmonic-case coefficients by polynomial fit of v on a shrinking real-t
/// ladder, Richardson-combined across two ladder scales.
pub fn fit_taylor_coeffs<T: Scalar>(
    count: usize,
    x: &[C<T>],
    y: &[C<T>],
    cfg: &DeformationConfig<T>,
) -> Result<(Vec<CMatrix<T>>, bool)> {
    let d = cfg.measure.d();
    if count == 0 {
        return Ok((Vec::new(), false));
    }
    let degree = count + 4; // guard terms past the requested order
    let points = 2 * degree + 4;
    let cap = cfg.t_domain_radius;
    let scale0 = if cap.is_finite() {
        cap * lit::<T>(0.8)
    } else {
        T::one()
    };

    let fit_at = |scale: T| -> Result<(Vec<CMatrix<T>>, T)> {
        let ratio = lit::<T>(0.87);
        let ts: Vec<T> = (0..points)
            .map(|i| scale * ratio.powi(i as i32))
            .collect();
        let mut vand = DMatrix::<C<T>>::zeros(points, degree + 1);
        for (i, &ti) in ts.iter().enumerate() {
            let u = ti / scale;
            for qd in 0..=degree {
                vand[(i, qd)] = C::new(u.powi(qd as i32), T::zero());
            }
        }
        let svd = vand.clone().svd(true, true);
        let smax = svd.singular_values.iter().fold(T::zero(), |a, &b| if b > a { b } else { a });
        let smin = svd
            .singular_values
            .iter()
            .fold(smax, |a, &b| if b < a { b } else { a });
        let cond = if smin > T::zero() { smax / smin } else { lit::<T>(f64::INFINITY) };

        let mut rhs = DMatrix::<C<T>>::zeros(points, d * d);
        for (i, &ti) in ts.iter().enumerate() {
            let v = v_sum(C::new(ti, T::zero()), x, y, cfg)?;
            for rr in 0..d {
                for cc in 0..d {
                    rhs[(i, rr * d + cc)] = v.value[(rr, cc)];
                }
            }
        }
        let sol = svd
            .solve(&rhs, lit::<T>(1e-14))
            .map_err(|e| Error::domain(format!("fit solve failed: {e}")))?;
        let mut out = Vec::with_capacity(count);
        for qd in 0..count {
            let mut mat = CMatrix::<T>::zeros(d, d);
            let unscale = scale.powi(qd as i32);
            for rr in 0..d {
                for cc in 0..d {
                    mat[(rr, cc)] = sol[(qd, rr * d + cc)].unscale(unscale);
                }
            }
            out.push(mat);
        }
        Ok((out, cond))
    };

    let (c1, cond1) = fit_at(scale0)?;
    let (c2, cond2) = fit_at(scale0 * lit::<T>(0.5))?;
    // Richardson in the ladder scale: leading fit bias of a_q scales like
    // scale^{degree+1-q}
    let mut coeffs = Vec::with_capacity(count);
    for qd in 0..count {
        let p = (degree + 1 - qd) as i32;
        let w = lit::<T>(2.0).powi(p);
        let m = &c2[qd].map(|z| z.scale(w)) - &c1[qd];
        coeffs.push(m.map(|z| z.unscale(w - T::one())));
    }
    let warn = cond1 > lit::<T>(1e10) || cond2 > lit::<T>(1e10);
    Ok((coeffs, warn))
}

/// Coefficients a_0..a_{r−1} (exact Borel route for ω = 0, ladder fit else)
/// together with R_r at each requested sample.
pub fn taylor_and_remainder<T: Scalar>(
    r: usize,
    t_samples: &[C<T>],
    x: &[C<T>],
    y: &[C<T>],
    cfg: &DeformationConfig<T>,
) -> Result<TaylorData<T>> {
    let (coeffs, condition_warning) = if cfg.omega == C::new(T::zero(), T::zero()) {
        (free_taylor_coeffs(r, x, y, cfg)?, false)
    } else {
        fit_taylor_coeffs(r, x, y, cfg)?
    };
    let mut remainders = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let v = v_sum(t, x, y, cfg)?;
        let mut rem = v.value;
        let mut tp = C::new(T::one(), T::zero());
        for a in coeffs.iter() {
            rem -= a.map(|z| z * tp);
            tp *= t;
        }
        remainders.push(rem);
    }
    Ok(TaylorData {
        coeffs,
        remainders,
        condition_warning,
    })
}
