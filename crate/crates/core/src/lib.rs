//! Exact construction and verification of quasi-tight multiframelet filter banks.
//!
//! Filters are matrices of Laurent polynomials in `z = e^{-i xi}` with
//! Gaussian-rational coefficients. Irrational normalisations are carried as
//! a single `sqrt` factor per matrix (see [`exactnum::QuadScalar`]).

pub mod bankio;
pub mod error;
pub mod exactnum;
pub mod fixtures;
pub mod laurent;
pub mod linalg;
pub mod moments;
pub mod normalform;
pub mod qtconstruct;
pub mod sturm;
pub mod transform;

pub use error::{Error, Result};
pub use exactnum::{GaussRational, QuadScalar};
pub use laurent::{LaurentMatrix, LaurentPoly, ScaledMatrix};
pub use moments::{JetMatrix, MomentJet};
