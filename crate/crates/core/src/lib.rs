//! Exact permanents of integer matrices, with an executable check of the
//! 2-adic valuation of the permanent of Sylvester-Hadamard matrices:
//! `v2(Per(H_n)) = 2^n - 1` for `n >= 2`.
//!
//! * [`matrix`]: sign and integer matrices, Sylvester constructions, minors.
//! * [`perm`]: naive, Laplace, Ryser, Glynn, sum-expansion and Sylvester
//!   fast-path permanent engines.
//! * [`valuation`]: `v2`, binary digit sums, Legendre's formula.
//! * [`verify`]: structured checks producing [`verify::VerifyReport`]s.
//! * [`text`]: the plain-text matrix file format.

pub mod error;
pub mod matrix;
pub mod perm;
pub mod text;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, MinorSpec, Origin, SignMatrix};
pub use perm::{EngineChoice, Limits, PermanentEngine, Workers};
pub use valuation::Valuation;
