//! Exact and certified-precision arithmetic for positive-characteristic multiple zeta
//! values: Anderson–Thakur polynomials and series, Carlitz multiple (star) polylogarithms
//! and their (t−θ)-jets, the t-modules G_{𝔰,u}, fiber coproducts, and the identities
//! relating all of them.

pub mod cli;
pub mod coproduct;
pub mod decomposition;
pub mod error;
pub mod explog;
pub mod field;
pub mod gauss;
pub mod index;
pub mod jet;
pub mod laurent;
pub mod logformula;
pub mod matrix;
pub mod poly;
pub mod polylog;
pub mod ratfunc;
pub mod scalar;
pub mod special;
pub mod suites;
pub mod tmodule;

pub use error::{Error, Result};
pub use field::{FieldElement, Fq};
pub use jet::Jet;
pub use laurent::LaurentNumber;
pub use matrix::Mat;
pub use poly::{BiPoly, UniPoly, Var};
pub use ratfunc::RatFunc;
pub use index::Index;
