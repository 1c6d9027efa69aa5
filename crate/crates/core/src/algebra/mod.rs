//! Exact arithmetic foundation: integers and rationals (GMP via `rug`),
//! explicit-precision complex floats, and uni/bivariate polynomial rings.

pub mod bivar;
pub mod linalg;
pub mod mp;
pub mod poly;

pub use bivar::{
    exact_divide, gcd_bivariate, height_bound, primitive_from_rational, squarefree_decompose,
    BivarPolyZ, Quotient, RecPoly, Var,
};
pub use mp::PrecComplex;
pub use poly::{Coeff, Poly, UniPolyQ, UniPolyZ};
pub use rug::{Integer, Rational};
