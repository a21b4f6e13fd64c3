use serde::{Deserialize, Serialize};

use super::{LaguerreGaussianSpec, StationaryKernel};
use crate::error::{Error, Result};
use crate::numerics::maximize_on_interval;

/// Exponential envelope `kappa · exp(-lambda · r)` dominating `|D|` at
/// separation `r` (in ∞-norm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub kappa: f64,
    pub lambda: f64,
}

impl DecayEnvelope {
    pub fn at(&self, r: f64) -> f64 {
        self.kappa * (-self.lambda * r).exp()
    }
}

/// Number of radii in the certification grid over `[0, 20 alpha]`.
const CERT_POINTS: usize = 200;

/// Fits `kappa` for a fixed decay rate `lambda`.
///
/// With `E(r) = sup_{|z| ≥ r} C(z)²`, the smallest admissible constant is
/// `sup_r E(r) e^{lambda r}`, which equals `sup_r C(r)² e^{lambda r}`: for
/// `r ≤ r'` one has `C(r')² e^{lambda r} ≤ C(r')² e^{lambda r'}`. The sup is
/// located on a dense radial grid and refined by golden section. Since
/// `|z|_∞ ≥ r` implies `|z|_2 ≥ r`, the Euclidean envelope also bounds the
/// ∞-norm statement.
pub fn fit_decay_envelope(spec: &LaguerreGaussianSpec, lambda: f64) -> Result<DecayEnvelope> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("envelope rate lambda must be positive, got {lambda}")));
    }
    let m = spec.m as f64;
    let scale = spec.alpha * m.sqrt();
    // Peak of exp(-2 r²/(m alpha²) + lambda r) sits at lambda m alpha² / 4; the
    // polynomial factor has degree 4(m - 1) in r.
    let r_max = 0.5 * lambda * m * spec.alpha * spec.alpha + scale * (12.0 + 2.0 * m);
    let h = |r: f64| {
        let c = spec.radial_value(r);
        c * c * (lambda * r).exp()
    };
    let grid = 4000 + 400 * spec.m;
    let (_, peak) = maximize_on_interval(h, 0.0, r_max, grid);
    if !(peak.is_finite() && peak > 0.0) || h(r_max) > 1e-8 * peak {
        return Err(Error::Numerical(format!(
            "decay envelope search did not converge (lambda = {lambda}, r_max = {r_max})"
        )));
    }
    let env = DecayEnvelope { kappa: peak * (1.0 + 1e-12), lambda };
    certify(spec, &env)?;
    Ok(env)
}

/// Radial decreasing majorant `E(r) = sup_{s ≥ r} C(s)²` on a grid, by a
/// reverse running maximum over a finer grid extending past the last radius.
pub(crate) fn radial_majorant(spec: &LaguerreGaussianSpec, radii: &[f64]) -> Vec<f64> {
    let last = radii.iter().cloned().fold(0.0, f64::max);
    let tail = last + spec.alpha * (spec.m as f64).sqrt() * 14.0;
    let fine = 20 * radii.len().max(100);
    let step = tail / fine as f64;
    let sq: Vec<f64> = (0..=fine).map(|i| spec.radial_value(step * i as f64).powi(2)).collect();
    let mut suffix = sq.clone();
    for i in (0..fine).rev() {
        suffix[i] = suffix[i].max(suffix[i + 1]);
    }
    radii
        .iter()
        .map(|&r| {
            let idx = ((r / step).ceil() as usize).min(fine);
            spec.radial_value(r).powi(2).max(suffix[idx])
        })
        .collect()
}

fn certify(spec: &LaguerreGaussianSpec, env: &DecayEnvelope) -> Result<()> {
    let radii: Vec<f64> = (0..CERT_POINTS)
        .map(|i| 20.0 * spec.alpha * i as f64 / (CERT_POINTS - 1) as f64)
        .collect();
    let majorant = radial_majorant(spec, &radii);
    for (r, e) in radii.iter().zip(majorant) {
        if e > env.at(*r) + 1e-12 {
            return Err(Error::Numerical(format!(
                "envelope certification failed at r = {r}: E(r) = {e} > {}",
                env.at(*r)
            )));
        }
    }
    Ok(())
}
