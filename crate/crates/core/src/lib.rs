//! Closed-loop simulation core for a linear-motor wafer-stage axis.
//!
//! The crate is `no_std` (it needs `alloc` for histories and traces) and
//! contains everything numeric:
//!
//! - [`fracops`]: Grünwald–Letnikov fractional derivative/integral operators
//!   and the `sig^a` power family.
//! - [`plant`]: the PMLSM stage model with parametric uncertainty, ripple,
//!   friction and injected disturbance, integrated with fixed-step RK4.
//! - [`trajgen`]: the trapezoidal-velocity scan reference.
//! - [`controllers`]: PID, boundary-layer SMC, fractional-order
//!   super-twisting (FOSTA) and its RBF-compensated variant (ANN-FSA),
//!   plus the gain-condition and convergence-region calculators.
//! - [`sim`]: the fixed-step episode runner, uncertainty oracle and
//!   Lyapunov/region monitors.
//!
//! File formats, CLI and reporting live in the `stage-ctl-bench` crate.
#![no_std]
#![warn(missing_docs)]
// `!(x > 0.0)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod controllers;
mod error;
pub mod fracops;
mod math;
pub mod plant;
pub mod sim;
pub mod trajgen;

pub use error::Error;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
