use nalgebra::RealField;
use num_traits::FromPrimitive;

/// Real scalar the whole crate is generic over: `f32` or `f64`.
///
/// `RealField` supplies the elementary functions (also for `Complex<T>`
/// through `ComplexField`), `FromPrimitive` the literal conversions.
pub trait Scalar: RealField + FromPrimitive + Copy + Send + Sync + 'static {
    fn to_f64(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

/// Shorthand for embedding an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal conversion")
}
