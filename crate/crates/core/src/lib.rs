//! Complex dynamics of the Riemann zeta function and its relatives.
//!
//! The crate evaluates ζ, η, ξ, Γ and Dirichlet L-functions anywhere in the
//! plane, finds their critical points, iterates the additive family
//! `f(z) + c` and the multiplicative family `c·f(z)`, analyses the transfer
//! functions that locate attracting and repelling parameter values, and
//! renders function portraits, parameter planes and Julia sets as
//! deterministic image tiles.

// `!(x > 0.0)` is how NaN gets rejected alongside non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod dynamics;
pub mod error;
pub mod farey;
pub mod render;
pub mod special;
pub mod transfer;
pub mod viewport;

pub use error::{Error, Result};
pub use special::{ComplexValue, EvalMode, EvalParams, FunctionId};
