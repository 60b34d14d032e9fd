//! Scalar abstractions shared by the generic numerics.
//!
//! [`Real`] covers `f32` and `f64`; [`Field`] additionally covers their
//! complex counterparts so that dense Hermitian code is written once.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

/// Real floating-point scalar.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Widening conversion used for diagnostics and statistics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Real or complex scalar with a conjugation.
pub trait Field:
    Copy + Debug + Default + PartialEq + NumAssign + Neg<Output = Self> + Send + Sync + 'static
{
    type Real: Real;
    const IS_COMPLEX: bool;

    fn from_real(r: Self::Real) -> Self;
    /// `re + i im`; real fields drop `im`.
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> Self::Real;

    #[inline]
    fn modulus(self) -> Self::Real {
        self.norm_sqr().sqrt()
    }

    #[inline]
    fn scale(self, r: Self::Real) -> Self {
        self * Self::from_real(r)
    }
}

macro_rules! impl_field_real {
    ($t:ty) => {
        impl Field for $t {
            type Real = $t;
            const IS_COMPLEX: bool = false;
            #[inline]
            fn from_real(r: $t) -> Self {
                r
            }
            #[inline]
            fn from_parts(re: $t, _im: $t) -> Self {
                re
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn im(self) -> $t {
                0.0
            }
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn norm_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn modulus(self) -> $t {
                <$t>::abs(self)
            }
        }
    };
}

impl_field_real!(f32);
impl_field_real!(f64);

impl<T: Real> Field for Complex<T> {
    type Real = T;
    const IS_COMPLEX: bool = true;
    #[inline]
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
    #[inline]
    fn from_parts(re: T, im: T) -> Self {
        Complex::new(re, im)
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn im(self) -> T {
        self.im
    }
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn norm_sqr(self) -> T {
        Complex::norm_sqr(&self)
    }
    #[inline]
    fn modulus(self) -> T {
        self.re.hypot(self.im)
    }
    #[inline]
    fn scale(self, r: T) -> Self {
        Complex::new(self.re * r, self.im * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip<E: Field>(x: E) -> E {
        x.conj().conj()
    }

    #[test]
    fn conj_is_involution() {
        let z = Complex::new(1.5f64, -2.0);
        assert_eq!(roundtrip(z), z);
        assert_eq!(roundtrip(3.0f32), 3.0);
        assert_eq!(Complex::new(3.0f64, 4.0).modulus(), 5.0);
        assert_eq!(Field::im(2.0f64), 0.0);
    }
}
