//! Scalar abstractions: a floating-point trait for the numeric (grid) side
//! and a coefficient-ring trait for the exact symbolic side.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, One, Zero};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

/// Floating-point scalars the grid machinery is generic over (f32 or f64).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + serde::Serialize
    + serde::de::DeserializeOwned
    + 'static
{
    fn from_f(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
    fn to_f(self) -> f64;
}

impl Real for f64 {
    fn to_f(self) -> f64 {
        self
    }
}
impl Real for f32 {
    fn to_f(self) -> f64 {
        self as f64
    }
}

/// Complex coefficient ring for symbol algebra.
///
/// Two instantiations matter in practice: `Complex<BigRational>` (exact, used
/// wherever identities must hold at the coefficient level) and `Complex<f64>`
/// (fast, used when symbols are only ever sampled).
pub trait Coeff:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + std::ops::Sub<Output = Self> + Debug
{
    /// Exact rational `num/den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    /// Complex conjugate.
    fn conj_c(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn recip_c(&self) -> Self;
    /// True if the imaginary part is exactly zero.
    fn is_real(&self) -> bool;
    /// Lossy view as `Complex<f64>` for evaluation and reporting.
    fn to_c64(&self) -> Complex<f64>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

/// Exact Gaussian-rational coefficients.
pub type ExactC = Complex<BigRational>;

impl Coeff for ExactC {
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn conj_c(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn recip_c(&self) -> Self {
        let norm2 = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        assert!(!norm2.is_zero(), "inverse of zero");
        Complex::new(self.re.clone() / norm2.clone(), -self.im.clone() / norm2)
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    fn to_c64(&self) -> Complex<f64> {
        fn r2f(r: &BigRational) -> f64 {
            // BigRational -> f64 via string is lossy but stable; go through
            // numerator/denominator floats which is exact for small values.
            let n = r.numer();
            let d = r.denom();
            bigint_to_f64(n) / bigint_to_f64(d)
        }
        Complex::new(r2f(&self.re), r2f(&self.im))
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

impl Coeff for Complex<f64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }
    fn i() -> Self {
        Complex::new(0.0, 1.0)
    }
    fn conj_c(&self) -> Self {
        self.conj()
    }
    fn recip_c(&self) -> Self {
        1.0 / self
    }
    fn is_real(&self) -> bool {
        self.im == 0.0
    }
    fn to_c64(&self) -> Complex<f64> {
        *self
    }
}
