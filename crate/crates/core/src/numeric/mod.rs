//! 1D grid realizations (plus a periodic time axis) and the numeric
//! verification harness.
//!
//! Interior ψdos are FFT multipliers on a padded box `[0, pad_factor)`,
//! applied to the zero extension of a field and restricted back to `[0, 1]`.
//! Traces and potentials act on end point values; differential operators
//! that must cancel exactly against their own realization are finite
//! differences.

mod boundary;
mod fd;
mod grid;
mod pairing;
mod quadrature;
mod realize;
mod spectral;
mod twopoint;
mod verify;

pub use boundary::{potential_k, trace_restrict};
pub use fd::{d1, d2, d2_4, dtt, helmholtz_apply, ld_apply, wave_apply};
pub use grid::{BoundaryField, Field, FieldPair, Grid1D, InteriorField};
pub use pairing::{adjoint_kernel, trace_adjoint_pair_check, PairingConfig};
pub use quadrature::{regularized_kernel, richardson_kernel, QuadConfig};
pub use realize::{realize_matrix, Binding, NumericRealization, OpFn, RealizedExpr, RealizedMatrix, RealizedOp, LIBRARY};
pub use spectral::{delay_apply, delay_field, dt_field, pdo_apply, pdo_apply_ext, time_derivative, Extension};
pub use twopoint::{p0_apply, r0_apply, twopoint_residual, TwoPointParams, TwoPointResidual, TwoPointSolver, WRONSKIAN_TOL};
pub use verify::{random_smooth_field, verify_parametrization, TrialReport, VerifyOptions, VerifyReport};
