//! Exact factorization of bivariate polynomials over ℚ from numerical root
//! approximations.
//!
//! The pipeline specializes one variable, approximates the roots of the
//! resulting univariate polynomial by homotopy continuation, recovers exact
//! minimal polynomials by lattice reduction, transports root groups to fresh
//! specialization nodes, and interpolates each factor exactly. Every reported
//! factorization is checked by exact multiplication before it is returned.

pub mod algebra;
pub mod continuation;
pub mod error;
pub mod interpolate;
pub mod minpoly;
pub mod par;
pub mod pipeline;
pub mod rootsolve;
mod track;

pub use error::{Error, Result};
