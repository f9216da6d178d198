//! Noncommutative operator algebra over declared generators.
//!
//! Expressions ([`OpExpr`]) are rational combinations of [`Word`]s, reduced
//! to normal form by a [`RewriteSystem`]. A [`BvOp`] is one 2x2 block
//! boundary value operator and an [`OpMatrix`] a matrix of those. Equality
//! of matrices is decided by normalizing their difference.

mod bvop;
mod expr;
mod matrix;
mod rewrite;

pub use bvop::BvOp;
pub use expr::{OpExpr, Word};
pub use matrix::{mat_add, mat_adjoint, mat_eq, mat_mul, mat_mul_raw, mat_scale, mat_sub, product_orders, OpMatrix};
pub use rewrite::{Rule, RewriteSystem, BOUNDARY_IDENTITY, DEFAULT_BUDGET, INTERIOR_IDENTITY};

