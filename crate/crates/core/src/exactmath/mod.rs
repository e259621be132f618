//! Exact substrate: rationals, sparse polynomials, dense rational matrices.

pub mod ideal;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use ideal::{combine, ideal_membership};
pub use matrix::{rank_of, RatMatrix};
pub use poly::{xname, Monomial, Poly};
pub use rational::{fmt_q, parse_q, q, qi, sign, Q};
