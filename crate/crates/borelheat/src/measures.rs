//! Potentials `c(x) = Σ_j e^{i x·ξ_j} M_j` given by finite matrix-valued
//! atomic measures, and their torus (Fourier-coefficient) form.

use crate::error::{Error, Result};
use crate::linalg::{bilinear_dot_real, dot_real, op_norm, rnorm};
use crate::{lit, C, CMatrix, Scalar};
use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

/// One atom `(ξ, M)` of the measure: frequency `ξ ∈ ℝ^ν`, weight `M ∈ ℂ^{d×d}`.
#[derive(Debug, Clone)]
pub struct Atom<T: Scalar> {
    pub xi: Vec<T>,
    pub weight: CMatrix<T>,
}

/// Finite atomic measure μ = Σ_j M_j δ_{ξ_j}. The empty atom list is the zero
/// measure (c ≡ 0). Immutable after construction.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure<T: Scalar> {
    nu: usize,
    d: usize,
    atoms: Vec<Atom<T>>,
}

impl<T: Scalar> DiscreteMeasure<T> {
    pub fn new(nu: usize, d: usize, atoms: Vec<Atom<T>>) -> Result<Self> {
        if nu == 0 || d == 0 {
            return Err(Error::config("nu and d must be positive"));
        }
        for (j, a) in atoms.iter().enumerate() {
            if a.xi.len() != nu {
                return Err(Error::config(format!(
                    "atom {j}: xi has length {} but nu = {nu}",
                    a.xi.len()
                )));
            }
            if a.weight.nrows() != d || a.weight.ncols() != d {
                return Err(Error::config(format!("atom {j}: weight is not {d}x{d}")));
            }
            if a.xi.iter().any(|v| !v.is_finite())
                || a.weight.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(Error::config(format!("atom {j}: non-finite entry")));
            }
        }
        Ok(DiscreteMeasure { nu, d, atoms })
    }

    /// The zero measure (c ≡ 0).
    pub fn zero(nu: usize, d: usize) -> Self {
        DiscreteMeasure {
            nu,
            d,
            atoms: Vec::new(),
        }
    }

    /// Single atom at ξ = 0: the constant potential c ≡ m.
    pub fn constant(nu: usize, m: CMatrix<T>) -> Result<Self> {
        let d = m.nrows();
        Self::new(
            nu,
            d,
            vec![Atom {
                xi: vec![T::zero(); nu],
                weight: m,
            }],
        )
    }

    /// Scalar cosine potential c(x) = 2β cos(x·e_1): atoms at ±e_1 with weight β.
    pub fn cosine(nu: usize, beta: T) -> Self {
        let mut plus = vec![T::zero(); nu];
        let mut minus = vec![T::zero(); nu];
        plus[0] = T::one();
        minus[0] = -T::one();
        let w = CMatrix::<T>::from_element(1, 1, C::new(beta, T::zero()));
        DiscreteMeasure {
            nu,
            d: 1,
            atoms: vec![
                Atom {
                    xi: plus,
                    weight: w.clone(),
                },
                Atom {
                    xi: minus,
                    weight: w,
                },
            ],
        }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Operator norms |M_j| of the weights, in atom order.
    pub fn atom_norms(&self) -> Vec<T> {
        self.atoms.iter().map(|a| op_norm(&a.weight)).collect()
    }

    /// Total variation Σ_j |M_j|.
    pub fn total_variation(&self) -> T {
        self.atom_norms().into_iter().fold(T::zero(), |a, b| a + b)
    }

    /// `c(x) = Σ_j exp(i x·ξ_j) M_j` with the bilinear dot product; entire in x.
    pub fn eval_potential(&self, x: &[C<T>]) -> CMatrix<T> {
        assert_eq!(x.len(), self.nu, "point dimension mismatch");
        let mut acc = CMatrix::<T>::zeros(self.d, self.d);
        for a in &self.atoms {
            let phase = (bilinear_dot_real(&a.xi, x) * C::i()).exp();
            acc += a.weight.map(|m| m * phase);
        }
        acc
    }

    /// `Σ_j exp(eps·ξ_j² + r·|ξ_j|) |M_j|`; monotone nondecreasing in both
    /// arguments; equals the total variation at (0,0).
    pub fn exp_moment(&self, eps: T, r: T) -> T {
        let mut acc = T::zero();
        for a in &self.atoms {
            let xi2 = dot_real(&a.xi, &a.xi);
            let xin = rnorm(&a.xi);
            acc += (eps * xi2 + r * xin).exp() * op_norm(&a.weight);
        }
        acc
    }

    /// Largest |ξ_j| over the atoms (0 for the zero measure).
    pub fn max_xi_norm(&self) -> T {
        self.atoms
            .iter()
            .map(|a| rnorm(&a.xi))
            .fold(T::zero(), |m, v| if v > m { v } else { m })
    }
}

/// Fourier data of a torus potential `c(x) = Σ_q c_q e^{2iπ q·x}` with
/// Hermitian symmetry `c_{-q} = c_q^*`.
#[derive(Debug, Clone)]
pub struct TorusPotential<T: Scalar> {
    nu: usize,
    d: usize,
    coeffs: Vec<(Vec<i64>, CMatrix<T>)>,
}

impl<T: Scalar> TorusPotential<T> {
    pub fn new(nu: usize, d: usize, coeffs: Vec<(Vec<i64>, CMatrix<T>)>) -> Result<Self> {
        if nu == 0 || d == 0 {
            return Err(Error::config("nu and d must be positive"));
        }
        for (q, m) in &coeffs {
            if q.len() != nu {
                return Err(Error::config(format!("coefficient key {q:?} has wrong length")));
            }
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::config(format!("coefficient {q:?} is not {d}x{d}")));
            }
        }
        for i in 0..coeffs.len() {
            for j in (i + 1)..coeffs.len() {
                if coeffs[i].0 == coeffs[j].0 {
                    return Err(Error::config(format!("duplicate coefficient key {:?}", coeffs[i].0)));
                }
            }
        }
        let p = TorusPotential { nu, d, coeffs };
        p.check_hermitian()?;
        Ok(p)
    }

    /// c(x) = 2β cos(2π x·e_1): c_{±e_1} = β, scalar.
    pub fn cosine(nu: usize, beta: T) -> Self {
        let mut plus = vec![0i64; nu];
        let mut minus = vec![0i64; nu];
        plus[0] = 1;
        minus[0] = -1;
        let w = CMatrix::<T>::from_element(1, 1, C::new(beta, T::zero()));
        TorusPotential {
            nu,
            d: 1,
            coeffs: vec![(plus, w.clone()), (minus, w)],
        }
    }

    /// Constant potential: single coefficient c_0 = m.
    pub fn constant(nu: usize, m: CMatrix<T>) -> Result<Self> {
        let d = m.nrows();
        Self::new(nu, d, vec![(vec![0i64; nu], m)])
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[(Vec<i64>, CMatrix<T>)] {
        &self.coeffs
    }

    /// Largest |q|_∞ in the support.
    pub fn max_q(&self) -> i64 {
        self.coeffs
            .iter()
            .flat_map(|(q, _)| q.iter().map(|v| v.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Upper bound Σ_q |c_q| for ‖c‖_∞ on the torus.
    pub fn sup_norm_bound(&self) -> T {
        self.coeffs
            .iter()
            .map(|(_, m)| op_norm(m))
            .fold(T::zero(), |a, b| a + b)
    }

    fn check_hermitian(&self) -> Result<()> {
        let tol = lit::<T>(1e-12);
        for (q, m) in &self.coeffs {
            let neg: Vec<i64> = q.iter().map(|v| -v).collect();
            let partner = self.coeffs.iter().find(|(p, _)| *p == neg);
            let expected = m.adjoint();
            match partner {
                Some((_, mneg)) => {
                    let defect = op_norm(&(mneg - &expected));
                    let scale = T::one() + op_norm(m);
                    if defect > tol * scale {
                        return Err(Error::config(format!(
                            "not Hermitian: c_{{-q}} != c_q^* for q = {q:?}"
                        )));
                    }
                }
                None => {
                    if op_norm(m) > tol {
                        return Err(Error::config(format!(
                            "not Hermitian: missing partner coefficient for q = {q:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// μ := Σ_q c_q δ_{ξ=2πq}: the atomic measure whose potential reproduces the
/// torus Fourier series. Rejects non-Hermitian input (already enforced by
/// `TorusPotential::new`, revalidated here for hand-built values).
pub fn measure_from_fourier_coeffs<T: Scalar>(p: &TorusPotential<T>) -> Result<DiscreteMeasure<T>> {
    p.check_hermitian()?;
    let two_pi = lit::<T>(2.0) * T::pi();
    let atoms = p
        .coeffs
        .iter()
        .map(|(q, m)| Atom {
            xi: q.iter().map(|&v| two_pi * lit::<T>(v as f64)).collect(),
            weight: m.clone(),
        })
        .collect();
    DiscreteMeasure::new(p.nu, p.d, atoms)
}

// --- JSON schema -----------------------------------------------------------
//
// {"nu":1,"d":1,"atoms":[{"xi":[1.0],"re":[[0.5]],"im":[[0.0]]}]}
// torus variant: {"nu":1,"d":1,"coeffs":[{"q":[1],"re":[[0.1]],"im":[[0.0]]}]}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub xi: Vec<f64>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub nu: usize,
    pub d: usize,
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusCoeffJson {
    pub q: Vec<i64>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusPotentialJson {
    pub nu: usize,
    pub d: usize,
    pub coeffs: Vec<TorusCoeffJson>,
}

fn matrix_from_parts<T: Scalar>(d: usize, re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<CMatrix<T>> {
    if re.len() != d || im.len() != d || re.iter().any(|r| r.len() != d) || im.iter().any(|r| r.len() != d)
    {
        return Err(Error::config("matrix blocks must be d x d"));
    }
    let mut m = CMatrix::<T>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = C::new(lit::<T>(re[i][j]), lit::<T>(im[i][j]));
        }
    }
    Ok(m)
}

impl<T: Scalar> DiscreteMeasure<T> {
    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let atoms = json
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    xi: a.xi.iter().map(|&v| lit::<T>(v)).collect(),
                    weight: matrix_from_parts(json.d, &a.re, &a.im)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.nu, json.d, atoms)
    }
}

impl<T: Scalar> TorusPotential<T> {
    pub fn from_json(json: &TorusPotentialJson) -> Result<Self> {
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| Ok((c.q.clone(), matrix_from_parts(json.d, &c.re, &c.im)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.nu, json.d, coeffs)
    }
}
