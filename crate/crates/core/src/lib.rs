//! Symplectic leaves, r-matrix Poisson brackets and factorization charts on
//! spaces of monic matrix polynomials.

pub mod error;
pub mod leaves;
pub mod mat;
pub mod matpoly;
pub mod poisson;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod smith;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use mat::Mat;
pub use matpoly::{MatPoly, MonicMatPoly};
pub use poly::{Degree, Poly};
pub use scalar::{ExactField, Field};

pub use num_complex::Complex64;

/// Reduced arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type RatPoly = Poly<Rational>;
pub type RatMat = Mat<Rational>;
pub type RatMatPoly = MatPoly<Rational>;
pub type RatMonic = MonicMatPoly<Rational>;

pub type ComplexPoly = Poly<Complex64>;
pub type ComplexMat = Mat<Complex64>;
pub type ComplexMatPoly = MatPoly<Complex64>;
pub type ComplexMonic = MonicMatPoly<Complex64>;

pub type RealMonic = MonicMatPoly<f64>;
