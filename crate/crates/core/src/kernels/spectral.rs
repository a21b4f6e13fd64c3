use std::f64::consts::PI;

use quadrature::double_exponential;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{LaguerreGaussianSpec, StationaryKernel};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

/// Slack on the eigenvalue gate `phi ≤ 1` for rounding in the equality case.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralMode {
    ClosedForm,
    NumericRadialTransform,
}

/// Fourier transform `phi(xi) = ∫ C(z) exp(-2 pi i xi·z) dz` of an isotropic kernel.
#[derive(Debug, Clone)]
pub struct SpectralDensity {
    spec: LaguerreGaussianSpec,
    mode: SpectralMode,
    /// Uniform radial grid `s_k = k·step` with cached values (numeric mode).
    step: f64,
    table: Vec<f64>,
    slope: Vec<f64>,
    sup: f64,
}

impl SpectralDensity {
    pub fn mode(&self) -> SpectralMode {
        self.mode
    }

    pub fn spec(&self) -> &LaguerreGaussianSpec {
        &self.spec
    }

    /// Largest value of `phi`; attained at the origin for this family.
    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// `phi` as a function of `|xi|`.
    pub fn radial(&self, s: f64) -> f64 {
        let s = s.abs();
        match self.mode {
            SpectralMode::ClosedForm => {
                let a = self.spec.alpha;
                let d = self.spec.d as f64;
                self.spec.rho * (PI.sqrt() * a).powf(d) * (-(PI * a * s).powi(2)).exp()
            }
            SpectralMode::NumericRadialTransform => self.interpolate(s),
        }
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        self.radial(xi.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// `∫_{R^d} phi`, which must equal `C(0) = rho`.
    pub fn integral(&self) -> f64 {
        let d = self.spec.d as f64;
        let surface = sphere_surface(self.spec.d);
        let s_max = self.radial_cutoff();
        let out = double_exponential::integrate(|s| s.powf(d - 1.0) * self.radial(s), 0.0, s_max, 1e-12 * self.spec.rho);
        surface * out.integral
    }

    fn radial_cutoff(&self) -> f64 {
        let m = self.spec.m as f64;
        ((50.0 + 10.0 * m) / m).sqrt() / (PI * self.spec.alpha)
    }

    fn interpolate(&self, s: f64) -> f64 {
        let x = s / self.step;
        let n = self.table.len();
        if x >= (n - 1) as f64 {
            return 0.0;
        }
        let i = x.floor() as usize;
        let t = x - i as f64;
        // Cubic Hermite with exact derivatives at the grid points.
        let (p0, p1) = (self.table[i], self.table[i + 1]);
        let (m0, m1) = (self.slope[i] * self.step, self.slope[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * p0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * p1
            + (t3 - t2) * m1;
        v.max(0.0)
    }
}

/// Surface area of the unit sphere `S^{d-1} ⊂ R^d`.
pub(crate) fn sphere_surface(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// Builds the spectral density of a Laguerre-Gaussian kernel.
///
/// `m = 1` uses the closed form `rho pi^{d/2} alpha^d exp(-pi² alpha² |xi|²)`.
/// For `m > 1` the transform is computed numerically: the kernel is projected
/// onto one axis, `P(t) = ∫_{R^{d-1}} C(t, u) du` (adaptive quadrature in the
/// radial variable of `u`), and `phi(s) = 2 ∫_0^∞ cos(2 pi s t) P(t) dt` by a
/// composite Gauss-Legendre rule. Values are cached on a radial grid.
///
/// Fails with [`Error::InvalidKernel`] if `phi` exceeds one anywhere.
pub fn spectral_density(spec: &LaguerreGaussianSpec) -> Result<SpectralDensity> {
    let mut sd = SpectralDensity {
        spec: *spec,
        mode: if spec.m == 1 { SpectralMode::ClosedForm } else { SpectralMode::NumericRadialTransform },
        step: 0.0,
        table: Vec::new(),
        slope: Vec::new(),
        sup: 0.0,
    };
    match sd.mode {
        SpectralMode::ClosedForm => {
            sd.sup = sd.radial(0.0);
        }
        SpectralMode::NumericRadialTransform => {
            let s_max = sd.radial_cutoff();
            let n_grid = 2048;
            sd.step = s_max / (n_grid - 1) as f64;
            (sd.table, sd.slope) = numeric_radial_table(spec, sd.step, n_grid);
            sd.sup = sd.table.iter().cloned().fold(0.0, f64::max);
        }
    }
    if sd.sup > 1.0 + EIGEN_TOL {
        return Err(Error::InvalidKernel(format!(
            "spectral density reaches {:.6} > 1: the kernel operator has eigenvalues outside [0, 1] \
             (alpha = {} exceeds alpha_max = {:.4})",
            sd.sup,
            spec.alpha,
            spec.alpha_max()
        )));
    }
    Ok(sd)
}

/// Composite Gauss-Legendre nodes and weights on `[0, b]`.
fn composite_rule(b: f64, panels: usize) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(8);
    let width = b / panels as f64;
    let mut out = Vec::with_capacity(panels * gx.len());
    for p in 0..panels {
        let a = width * p as f64;
        for (x, w) in gx.iter().zip(&gw) {
            out.push((a + 0.5 * width * (x + 1.0), 0.5 * width * w));
        }
    }
    out
}

/// Values and derivatives of `phi` on the grid `k·step`.
fn numeric_radial_table(spec: &LaguerreGaussianSpec, step: f64, n_grid: usize) -> (Vec<f64>, Vec<f64>) {
    let d = spec.d;
    let m = spec.m as f64;
    let r_cut = spec.alpha * m.sqrt() * (10.0 + m);
    let lateral_rule = composite_rule(r_cut, 64);
    let lateral = if d > 1 { sphere_surface(d - 1) } else { 0.0 };
    let projected = |t: f64| -> f64 {
        if d == 1 {
            return spec.radial_value(t);
        }
        let v: f64 = lateral_rule
            .iter()
            .map(|&(u, w)| w * spec.radial_value((t * t + u * u).sqrt()) * u.powi(d as i32 - 2))
            .sum();
        lateral * v
    };

    let nodes: Vec<(f64, f64)> = composite_rule(r_cut, 256).into_iter().map(|(t, w)| (t, w * projected(t))).collect();
    let mut values = Vec::with_capacity(n_grid);
    let mut slopes = Vec::with_capacity(n_grid);
    for k in 0..n_grid {
        let s = step * k as f64;
        let (mut v, mut dv) = (0.0, 0.0);
        for &(t, wp) in &nodes {
            let (sin, cos) = (2.0 * PI * s * t).sin_cos();
            v += cos * wp;
            dv -= 2.0 * PI * t * sin * wp;
        }
        values.push(2.0 * v);
        slopes.push(2.0 * dv);
    }
    (values, slopes)
}
