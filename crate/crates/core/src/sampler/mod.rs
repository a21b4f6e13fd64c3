//! Approximate simulation of stationary determinantal point processes on
//! cubic windows, and first/second-moment estimators used to validate it.
//!
//! The sampler periodizes the window, diagonalizes the kernel in the Fourier
//! basis (eigenvalues are values of the spectral density on the lattice
//! `Z^d / L`), keeps each mode independently with probability equal to its
//! eigenvalue, and draws the resulting projection DPP point by point.

mod dpp;
mod moments;
mod pattern;
mod seed;

pub use dpp::{sample_dpp, DppSampler, SamplerOptions, TruncationSummary, EIGEN_SLACK, NEGATIVE_GUARD, TRUNCATION_TOL};
pub use moments::{empirical_intensity, empirical_pcf, theoretical_pcf, theoretical_pcf_bin, IntensityEstimate, PcfBin};
pub use pattern::{PointPattern, Window};
pub use seed::{derive_master, SeedSpec};
