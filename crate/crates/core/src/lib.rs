//! Spectrum and zeta-regularized determinant of the wave operator on an
//! interval `(0, L)` with Dirichlet ends and a point damping of complex
//! strength `alpha` at `x = a`.
//!
//! The eigenvalues are the nonzero roots of
//! `sinh(L λ) + α sinh(a λ) sinh((L - a) λ) = 0`. For a rational split
//! `a = p L0`, `L - a = q L0` the condition reduces to a polynomial in
//! `z = exp(2 L0 λ)` and the determinant can be evaluated three independent
//! ways ([`determinant`]). For arbitrary `a` the eigenvalues are located by
//! argument-principle counting ([`general`]).

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod determinant;
pub mod error;
pub mod general;
pub mod model;
pub mod rational;
pub mod specfun;
pub mod sweep;
pub mod verify;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use model::{BranchCut, CutSide, EigenvalueRecord, Family, RationalSplit, StringConfig};
