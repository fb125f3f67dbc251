//! Padé matrices of truncated multivariate series, dimensions of Taylor
//! varieties via randomized ranks over a prime field, Padé approximation,
//! Fröberg-series census and Hessian rank probes.

pub mod approx;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod field;
pub mod hessian;
pub mod froberg;
pub mod monomial;
pub mod pade;
pub mod series;

pub use error::{Error, Result};
pub use field::{DenseMatrix, FieldElement, PrimeField, DEFAULT_PRIME};
pub use monomial::{count_monomials, DegreeOrder, Exponent, MonomialRange, TieBreak};
pub use series::{RationalPair, TruncatedPoly};
