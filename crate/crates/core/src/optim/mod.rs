//! Numerical kernels: linear programming, log-barrier interior point,
//! minimum enclosing balls.

pub(crate) mod barrier;
pub mod meb;
pub mod feasible;
pub mod search;
pub mod simplex;

pub use simplex::{lp_max, LinearProgram, LpOutcome};
