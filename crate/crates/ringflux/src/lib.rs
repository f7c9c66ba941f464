//! Spectral toolkit for a two-dimensional flux line dressed by concentric
//! delta rings, reduced to angular channels on the half-line.
//!
//! The pieces fit together in layers:
//!
//! * [`lattice`]: the periodic comparison chain; spectral edge E0, the
//!   Kronig-Penney discriminant, the band-edge profile u and its cell
//!   averages, the critical flux alpha_crit.
//! * [`radial`]: one angular channel; adaptive integration through the
//!   delta circles, Prufer and frame phases, the accumulation dichotomy.
//! * [`spectral`]: truncated-interval spectra; oscillation counts, shooting
//!   eigenvalues, a finite-difference cross-check, quadratic forms.
//! * [`cli`]: the `ringflux` binary (threshold / critical / classify /
//!   eigen) with JSON and CSV output.
//!
//! The runnable examples under `examples/` walk each capability.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod numerics;
pub mod radial;
pub mod spectral;

pub use error::{Error, Result};
