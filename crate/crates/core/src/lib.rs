#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical core for the conceptua toolkit.
//!
//! Everything here is allocation-only (`alloc`) and IO-free, so it builds for
//! `no_std` targets. File formats, reports and the command line live in the
//! `conceptua` companion crate.
//!
//! - [`hilbert`]: dense density states, projective measurements, SU(N)
//!   generators and the trace-formula Born rule.
//! - [`ebr`]: the extended Bloch representation and its hidden-measurement
//!   collapse sampler.
//! - [`interference`]: disjunction interference phases.
//! - [`bell`]: CHSH correlators.
//! - [`cognitons`]: word rank-frequency tables and Bose-Einstein /
//!   Maxwell-Boltzmann fits.
//! - [`dilation`]: step-counting time dilation trajectories.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod cognitons;
pub mod dilation;
pub mod ebr;
mod error;
pub mod hilbert;
pub mod interference;
pub mod linalg;
pub(crate) mod math;
pub mod sampling;

pub use error::{Error, Result};
pub use num_complex::Complex64;
