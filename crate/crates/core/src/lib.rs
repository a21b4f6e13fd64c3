//! Explicit Stein-method bounds for the normal approximation of functionals
//! of negatively associated point processes, with a simulator for stationary
//! Laguerre-Gaussian determinantal point processes and a Monte-Carlo harness
//! that checks empirical L1 distances against the bound.
//!
//! - [`kernels`]: Laguerre-Gaussian kernels, existence gate, spectral density,
//!   decay envelopes and the variance condition.
//! - [`sampler`]: spectral DPP simulation on cubic windows, intensity and pair
//!   correlation estimators.
//! - [`statistics`]: local functionals, unit-cube covering and block decomposition.
//! - [`stein`]: the explicit bound, its constants and auxiliary inequalities.
//! - [`verify`]: empirical distances to `N(0, 1)` and the verification harness.
//! - [`cli`] and [`config`]: the `stein-dpp` command line.

pub mod cli;
pub mod config;
pub mod error;
pub mod kernels;
pub mod numerics;
pub mod sampler;
pub mod statistics;
pub mod stein;
pub mod verify;

pub use error::{Error, Result};
