//! Exact computation and verification of r-matrices and coboundary Lie
//! bialgebra structures on low-dimensional real Lie algebras.
//!
//! Everything is computed over ℚ with arbitrary-precision integers. The
//! thirteen real four-dimensional indecomposable families ship as data,
//! together with golden tables that the [`classify`] harness checks.

#![allow(clippy::needless_range_loop)]

pub mod centerext;
pub mod classify;
pub mod darboux;
pub mod data;
pub mod derivations;
pub mod error;
pub mod exactmath;
pub mod grassmann;
pub mod liealg;
pub mod parse;
pub mod yangbaxter;

pub use error::{Error, Result};
pub use exactmath::{Monomial, Poly, RatMatrix, Q};
pub use grassmann::{Blade, MultiVector, SymMultiVector};
pub use liealg::catalog::{catalog, CatalogId, Family};
pub use liealg::LieAlgebra;
