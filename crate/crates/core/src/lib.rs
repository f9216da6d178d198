//! Symbolic-numeric toolkit for linear pseudo-differential boundary value
//! control systems.
//!
//! Systems `A u = 0` are written over 2x2 block boundary value operators
//! `(r+A + B, K; T, Q)` acting on interior and boundary functions. The crate
//! assembles such systems into square-block matrices `L`, builds
//! parametrizations `u = S f` (from lifts `L P L = L`, right inverses
//! `L P = I`, or polynomial syzygies in the constant-coefficient case) and
//! checks them symbolically, by normal forms modulo declared operator
//! identities, and numerically on 1D grid realizations.
//!
//! Module map:
//!
//! - [`order`]: order matrices, class vectors and their composition rules.
//! - [`algebra`]: words, expressions, rewrite systems, block operators,
//!   operator matrices and formal adjoints.
//! - [`assembly`]: padding of raw block systems into `L` and module
//!   presentations.
//! - [`parametrize`]: complex/lift/inverse checks, `S = I - P L`, order
//!   reduction and the adjoint route.
//! - [`poly`]: exact polynomial engine (Gröbner bases, syzygies,
//!   exactness certificates, symbol maps).
//! - [`numeric`]: grid realizations and verification harness.
//! - [`format`]: the line-oriented system file format used by the CLI.

pub mod algebra;
pub mod assembly;
pub mod error;
pub mod format;
pub mod numeric;
pub mod order;
pub mod parametrize;
pub mod poly;

pub use error::{Error, Result};

/// Exact rational scalar used throughout the symbolic layer.
pub type Q = num_rational::BigRational;

/// Small-integer convenience constructor for [`Q`].
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `n / d` as an exact rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
