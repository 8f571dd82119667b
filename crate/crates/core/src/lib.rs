//! Counting representations of integers as a perfect square plus a positive
//! squarefree integer, with certified constants and fully explicit error
//! budgets, plus explicit upper bounds for the divisor function.
//!
//! The crate is organized around exhaustively verifiable statements: every
//! analytic bound it evaluates is paired with a brute-force or sieve-based
//! check over a concrete range, and every quoted constant is recomputed as a
//! certified enclosure rather than trusted.
//!
//! Module map:
//! - [`primes`]: segmented sieve, deterministic primality, explicit
//!   Chebyshev/Mertens sums.
//! - [`arithfun`]: factorization and multiplicative functions, including the
//!   quadratic-congruence counting function g.
//! - [`representation`]: exact representation counts, the squarefree sieve,
//!   and positivity campaigns.
//! - [`asymptotic`]: singular Euler products, error budgets, log-domain
//!   evaluation at astronomically large arguments, residue casework.
//! - [`divisor_bound`]: explicit divisor-function bounds and range scans.

pub mod arithfun;
pub mod asymptotic;
pub mod divisor_bound;
pub mod enclosure;
pub mod error;
pub mod kahan;
pub mod logmag;
pub mod primes;
pub mod report;
pub mod representation;

pub use enclosure::Enclosure;
pub use error::{Error, Result};
pub use logmag::LogMagnitude;
pub use report::VerifyReport;
