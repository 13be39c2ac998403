//! Coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Exact rational
//! arithmetic ([`Rational`](crate::Rational)) backs the divisibility-sensitive
//! paths (gcd, Smith form, leaf classification, exact Poisson identities);
//! `f64`, `f32` and `Complex<f64>` back the numeric paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// A commutative field usable as a polynomial coefficient.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when equality and zero tests are exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Nearest representable value. Exact for rationals built from finite floats.
    fn from_f64(v: f64) -> Self;

    /// Absolute value as a float, used for pivoting and residual norms.
    fn modulus(&self) -> f64;

    fn to_c64(&self) -> Complex<f64>;

    /// Split into a sign flag and the textual magnitude, for pretty printing.
    /// Fields without an order report `false` and their full representation.
    fn sign_and_magnitude(&self) -> (bool, String);

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Marker for fields whose arithmetic is exact; gcds and Smith forms are only
/// defined over these.
pub trait ExactField: Field + Eq {}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v).unwrap_or_else(BigRational::zero)
    }

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn sign_and_magnitude(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl ExactField for BigRational {}

macro_rules! impl_real_field {
    ($t:ty) => {
        impl Field for $t {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_f64(v: f64) -> Self {
                v as $t
            }

            fn modulus(&self) -> f64 {
                self.abs() as f64
            }

            fn to_c64(&self) -> Complex<f64> {
                Complex::new(*self as f64, 0.0)
            }

            fn sign_and_magnitude(&self) -> (bool, String) {
                (self.is_sign_negative(), self.abs().to_string())
            }
        }
    };
}

impl_real_field!(f64);
impl_real_field!(f32);

impl Field for Complex<f64> {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }

    fn from_f64(v: f64) -> Self {
        Complex::new(v, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> Complex<f64> {
        *self
    }

    fn sign_and_magnitude(&self) -> (bool, String) {
        if self.im == 0.0 {
            (self.re.is_sign_negative(), self.re.abs().to_string())
        } else {
            (false, format!("({}{:+}i)", self.re, self.im))
        }
    }
}
