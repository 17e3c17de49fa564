//! Heat kernels for `-∂² + (ω²/4)x² - c(x)` with `c` the Fourier transform of a
//! finite atomic measure: deformation series, explicit Borel transforms, Laplace
//! resummation and the exact Poisson trace formula on the torus.
//!
//! The crate is generic over the real scalar type (`f32`/`f64`) through the
//! [`Scalar`] trait; concrete `f64` aliases are exported at the root.

pub mod borel;
pub mod defmatrix;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod mehler;
pub mod oracle;
pub mod quad;
pub mod series;
pub mod torus;

mod scalar;

pub use error::{Error, Result};
pub use scalar::{lit, Scalar};

/// Complex number over a generic real scalar.
pub type C<T> = nalgebra::Complex<T>;
/// Dense complex matrix (d×d weights, Galerkin blocks, ...).
pub type CMatrix<T> = nalgebra::DMatrix<C<T>>;

/// Default concrete scalar used by the CLI and the acceptance suite.
pub type C64 = C<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type DiscreteMeasure64 = measures::DiscreteMeasure<f64>;
pub type TorusPotential64 = measures::TorusPotential<f64>;
pub type DeformationConfig64 = series::DeformationConfig<f64>;
pub type BorelEvaluator64 = borel::BorelEvaluator<f64>;
pub type CertificationReport64 = borel::CertificationReport<f64>;
