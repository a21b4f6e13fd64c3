use serde::{Deserialize, Serialize};

use super::{kernel_value, LaguerreGaussianSpec};
use crate::error::{Error, Result};
use crate::numerics::adaptive_cubature;
use crate::statistics::LocalStatistic;

/// Outcome of the lower-variance sufficient condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceCondition {
    /// Estimate of `n^{-d} ∫_{Λ_n^p} g({x_1..x_p}) det[K(x_i, x_j)] dx`.
    pub lower_estimate: f64,
    /// Quadrature error estimate attached to `lower_estimate`.
    pub quadrature_error: f64,
    pub satisfied: bool,
}

/// Evaluates the determinant-weighted integral of `g` over `[0, n]^{dp}`,
/// normalized by the window volume, for statistics supported on subsets of a
/// single size `p ∈ {1, 2}`.
///
/// The statistic is taken to be translation invariant (true for every
/// built-in kind), so for `p = 2` the double integral reduces to
/// `∫ g({0, z}) (rho² - C(z)²) Π_j (1 - |z_j|/n)_+ dz` over `|z|_∞ ≤ tau`,
/// evaluated by adaptive cubature. For `p = 1` the value is `rho · g({0})`.
///
/// The condition holds when the estimate is positive by more than its
/// quadrature error. Requires `‖K‖ < 1`, i.e. a strictly valid spec.
pub fn sufficient_variance_condition(
    spec: &LaguerreGaussianSpec,
    stat: &LocalStatistic,
    n: f64,
) -> Result<VarianceCondition> {
    if !spec.is_strictly_valid() {
        return Err(Error::InvalidKernel(format!(
            "the variance condition needs alpha < alpha_max strictly (alpha = {}, alpha_max = {:.6})",
            spec.alpha,
            spec.alpha_max()
        )));
    }
    if stat.dimension() != spec.d {
        return Err(Error::InvalidArgument("statistic and kernel dimensions differ".into()));
    }
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!("window side must be positive, got {n}")));
    }
    let d = spec.d;
    let (value, error) = match stat.fixed_subset_size() {
        Some(1) => {
            let origin = vec![0.0; d];
            (spec.rho * stat.eval_subset(&[&origin]), 0.0)
        }
        Some(2) => {
            let origin = vec![0.0; d];
            let tau = stat.tau().min(n);
            let rho2 = spec.rho * spec.rho;
            let integrand = |z: &[f64]| {
                let g = stat.eval_subset(&[&origin, z]);
                if g == 0.0 {
                    return 0.0;
                }
                let c = kernel_value(spec, z);
                let edge: f64 = z.iter().map(|v| (1.0 - v.abs() / n).max(0.0)).product();
                g * (rho2 - c * c) * edge
            };
            let lo = vec![-tau; d];
            let hi = vec![tau; d];
            let scale = rho2 * stat.g_bound() * (2.0 * tau).powi(d as i32);
            let budget = match d {
                1 => 200_000,
                2 => 4_000_000,
                _ => 20_000_000,
            };
            let out = adaptive_cubature(integrand, &lo, &hi, 1e-8 * scale, budget);
            (out.value, out.error)
        }
        Some(p) => {
            return Err(Error::Unsupported(format!(
                "variance condition implemented for subset sizes 1 and 2, got {p}"
            )))
        }
        None => {
            return Err(Error::Unsupported(
                "variance condition needs a statistic supported on subsets of one fixed size".into(),
            ))
        }
    };
    Ok(VarianceCondition { lower_estimate: value, quadrature_error: error, satisfied: value > 0.0 && value > error })
}
