//! Pseudo-spectral incompressible Navier-Stokes on the periodic box
//! `[0, 2π)³`, instrumented with anisotropic mixed Lebesgue norms of the
//! one-directional derivative `∂₃u`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command-line driver live in the `anisoreg-cli` companion crate.
//!
//! Layout:
//!
//! * [`grid`], [`field`], [`spectral`], [`fft`]: periodic grids, real and
//!   spectral field representations, spectral differentiation, Leray
//!   projection and rectangle-rule quadrature.
//! * [`mixed_norm`]: nested `L^p_{x1} L^q_{x2} L^r_{x3}` norms and the
//!   exponent algebra around them.
//! * [`inequality`]: boundary-vanishing test functions and the two
//!   anisotropic interpolation ratios, with empirical-constant reports.
//! * [`solver`]: dealiased pseudo-spectral integrator (RK4 with exact
//!   viscous integrating factor).
//! * [`monitor`]: per-sample regularity diagnostics, time accumulation and
//!   inequality audits along trajectories.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod inequality;
mod math;
pub mod mixed_norm;
pub mod monitor;
pub mod quadrature;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{ScalarField, SpectralField, VectorField};
pub use grid::{Axis, Grid3};
pub use mixed_norm::{Beta, Exponent, MixedExponents};
