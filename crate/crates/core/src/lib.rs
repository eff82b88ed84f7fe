//! Exact q-expansions of level p modular functions for the genus-zero primes
//! p in {2, 3, 5, 7}, the Hecke operator `U_p`, and machinery that checks the
//! p-adic divisibility of their Fourier coefficients.
//!
//! The layers, bottom up:
//!
//! - [`series`]: truncated Laurent/Puiseux series over exact rationals.
//! - [`eta`]: the Euler product, the Hauptmoduln `psi` and `phi`, and a
//!   floating-point eta evaluator for cusp checks.
//! - [`basis`]: the canonical basis `f_{0,m}` and polynomial extraction in
//!   `psi` / `phi`.
//! - [`hecke`]: iterated `U_p`, the modular equation for `U_p phi`, Newton
//!   power sums and the `R^(p)` lattice.
//! - [`congruence`]: the coefficient congruences, valuation tables, the
//!   j-invariant and exploratory scans.

pub mod basis;
pub mod congruence;
pub mod error;
pub mod eta;
pub mod hecke;
pub mod kernel;
pub mod poly;
pub mod prime;
pub mod scalar;
pub mod series;

pub use basis::{BasisBuilder, BasisElement};
pub use error::{Error, Result};
pub use poly::PhiPolynomial;
pub use prime::PrimeContext;
pub use scalar::{val_p, ExactScalar, Valuation};
pub use series::QSeries;
