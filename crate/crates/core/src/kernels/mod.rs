//! Laguerre-Gaussian kernels for stationary determinantal point processes.
//!
//! The family is indexed by an order `m ≥ 1`, a length scale `alpha`, an
//! intensity `rho` and the ambient dimension `d`:
//!
//! ```text
//! C(z) = rho / C(m-1+d/2, m-1) · L_{m-1}^{d/2}(|z/alpha|² / m) · exp(-|z/alpha|² / m)
//! ```
//!
//! `m = 1` is the Gaussian DPP. A process with this kernel exists iff
//! `alpha ≤ max_intensity_alpha(m, rho, d)`; strict inequality gives an
//! integral operator of norm strictly below one.

mod envelope;
mod laguerre;
mod spectral;
mod variance;

pub use envelope::{fit_decay_envelope, DecayEnvelope};
pub use laguerre::{binomial, laguerre, ln_binomial};
pub use spectral::{spectral_density, SpectralDensity, SpectralMode};
pub use variance::{sufficient_variance_condition, VarianceCondition};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A stationary, isotropic kernel `K(x, y) = C(x - y)`.
///
/// The sampler and the verification harness only need these three
/// quantities; the Laguerre-Gaussian family is the provided implementation.
pub trait StationaryKernel: Send + Sync {
    fn dimension(&self) -> usize;

    /// `C(z)` for a displacement `z`.
    fn value(&self, z: &[f64]) -> f64;

    /// `C` as a function of the Euclidean norm `|z|`.
    fn radial_value(&self, r: f64) -> f64;

    /// First-order intensity `C(0)`.
    fn intensity(&self) -> f64 {
        self.radial_value(0.0)
    }
}

/// Parameters of a Laguerre-Gaussian kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreGaussianSpec {
    pub m: usize,
    pub alpha: f64,
    pub rho: f64,
    pub d: usize,
}

impl LaguerreGaussianSpec {
    /// Builds a well-formed spec. Existence is *not* checked here; see
    /// [`is_valid`](Self::is_valid) and [`check_existence`](Self::check_existence).
    pub fn new(m: usize, alpha: f64, rho: f64, d: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("kernel order m must be ≥ 1".into()));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("dimension d must be ≥ 1".into()));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
        }
        Ok(Self { m, alpha, rho, d })
    }

    /// Gaussian DPP (`m = 1`).
    pub fn gaussian(alpha: f64, rho: f64, d: usize) -> Result<Self> {
        Self::new(1, alpha, rho, d)
    }

    fn half_d(&self) -> f64 {
        self.d as f64 / 2.0
    }

    /// `C(m - 1 + d/2, m - 1)`, the normalizer making `C(0) = rho`.
    pub fn normalizer(&self) -> f64 {
        binomial(self.m as f64 - 1.0 + self.half_d(), self.m - 1)
    }

    pub fn alpha_max(&self) -> f64 {
        max_intensity_alpha(self.m, self.rho, self.d)
    }

    /// Existence of the DPP (closed condition).
    pub fn is_valid(&self) -> bool {
        self.alpha <= self.alpha_max()
    }

    /// Strict inequality, which makes the integral operator a strict contraction.
    pub fn is_strictly_valid(&self) -> bool {
        self.alpha < self.alpha_max()
    }

    /// Errors with a message naming the violated bound when the DPP does not exist.
    pub fn check_existence(&self) -> Result<()> {
        let amax = self.alpha_max();
        if self.alpha <= amax {
            Ok(())
        } else {
            Err(Error::InvalidKernel(format!(
                "alpha = {} exceeds the existence maximum alpha_max = {:.4} \
                 ([C(m-1+d/2, m-1) / (rho (m pi)^(d/2))]^(1/d) with m = {}, rho = {}, d = {})",
                self.alpha, amax, self.m, self.rho, self.d
            )))
        }
    }

    /// Kernel as a function of the squared, scaled radius `q = |z/alpha|²`.
    pub(crate) fn profile_scaled_sq(&self, q: f64) -> f64 {
        let m = self.m as f64;
        let u = q / m;
        self.rho / self.normalizer() * laguerre(self.m - 1, self.half_d(), u) * (-u).exp()
    }
}

impl StationaryKernel for LaguerreGaussianSpec {
    fn dimension(&self) -> usize {
        self.d
    }

    fn value(&self, z: &[f64]) -> f64 {
        kernel_value(self, z)
    }

    fn radial_value(&self, r: f64) -> f64 {
        let s = r / self.alpha;
        self.profile_scaled_sq(s * s)
    }

    fn intensity(&self) -> f64 {
        self.rho
    }
}

/// `C_{m,alpha,rho}(z)`.
pub fn kernel_value(spec: &LaguerreGaussianSpec, z: &[f64]) -> f64 {
    debug_assert_eq!(z.len(), spec.d);
    let q: f64 = z.iter().map(|v| (v / spec.alpha).powi(2)).sum();
    spec.profile_scaled_sq(q)
}

/// Largest `alpha` for which the Laguerre-Gaussian DPP exists:
/// `[C(m-1+d/2, m-1) / (rho (m pi)^(d/2))]^(1/d)`.
pub fn max_intensity_alpha(m: usize, rho: f64, d: usize) -> f64 {
    let df = d as f64;
    let ln_b = ln_binomial(m as f64 - 1.0 + df / 2.0, m - 1);
    let ln_den = rho.ln() + (df / 2.0) * (m as f64 * PI).ln();
    ((ln_b - ln_den) / df).exp()
}

/// Covariance density `D(x, y) = rho_2(x, y) - rho^2 = -C(x - y)²`.
pub fn covariance_d(spec: &LaguerreGaussianSpec, x: &[f64], y: &[f64]) -> f64 {
    let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let c = kernel_value(spec, &z);
    -c * c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_specs() {
        assert!(LaguerreGaussianSpec::new(0, 0.1, 1.0, 1).is_err());
        assert!(LaguerreGaussianSpec::new(1, 0.0, 1.0, 1).is_err());
        assert!(LaguerreGaussianSpec::new(1, 0.1, -1.0, 1).is_err());
        assert!(LaguerreGaussianSpec::new(1, 0.1, 1.0, 0).is_err());
        assert!(LaguerreGaussianSpec::new(1, f64::NAN, 1.0, 1).is_err());
    }

    #[test]
    fn value_at_origin_is_rho() {
        for m in 1..6 {
            for d in 1..4 {
                let s = LaguerreGaussianSpec::new(m, 0.3, 2.5, d).unwrap();
                let v = kernel_value(&s, &vec![0.0; d]);
                assert!((v - 2.5).abs() < 1e-12, "m={m} d={d} v={v}");
            }
        }
    }

    #[test]
    fn gaussian_member_closed_form() {
        let s = LaguerreGaussianSpec::gaussian(0.7, 3.0, 2).unwrap();
        let z = [0.4, -0.9];
        let q = (0.16 + 0.81) / 0.49;
        assert!((kernel_value(&s, &z) - 3.0 * (-q as f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn alpha_max_reference_values() {
        assert!((max_intensity_alpha(1, 1.0, 1) - 0.5641895835477563).abs() < 1e-12);
        assert!((max_intensity_alpha(1, 4.0, 2) - 0.28209479177387814).abs() < 1e-12);
    }

    #[test]
    fn alpha_max_scaling_in_rho() {
        for d in 1..4 {
            for m in 1..4 {
                let base = max_intensity_alpha(m, 1.7, d);
                let scaled = max_intensity_alpha(m, 1.7 * 5.0, d);
                let expect = base * 5f64.powf(-1.0 / d as f64);
                assert!((scaled - expect).abs() < 1e-12 * expect);
            }
        }
    }

    #[test]
    fn covariance_is_minus_squared_kernel() {
        let s = LaguerreGaussianSpec::new(1, 0.5, 2.0, 1).unwrap();
        assert!((covariance_d(&s, &[1.0], &[1.0]) + 4.0).abs() < 1e-14);
        let far = covariance_d(&s, &[0.0], &[3.0]);
        let closed = -4.0 * (-2.0 * 9.0 / 0.25f64).exp();
        assert!((far - closed).abs() <= 1e-12 * closed.abs());
    }

    #[test]
    fn existence_message_names_the_bound() {
        let s = LaguerreGaussianSpec::gaussian(0.6, 1.0, 2).unwrap();
        let err = s.check_existence().unwrap_err();
        assert!(err.to_string().contains("0.5642"), "{err}");
        assert!(LaguerreGaussianSpec::gaussian(0.5, 1.0, 2).unwrap().check_existence().is_ok());
    }
}
