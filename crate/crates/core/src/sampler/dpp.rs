use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pattern::{PointPattern, Window};
use super::seed::SeedSpec;
use crate::error::{Error, Result};
use crate::kernels::{spectral_density, LaguerreGaussianSpec, SpectralDensity, StationaryKernel};

/// Fraction of the spectral mass allowed outside the retained modes.
pub const TRUNCATION_TOL: f64 = 1e-3;
/// Eigenvalues above `1 + EIGEN_SLACK` reject the kernel.
pub const EIGEN_SLACK: f64 = 1e-9;
/// Conditional intensities below `-NEGATIVE_GUARD` (relative) abort sampling.
pub const NEGATIVE_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerOptions {
    /// Largest admissible `K_max` (sup-norm radius of retained frequencies).
    pub k_max_cap: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self { k_max_cap: 2048 }
    }
}

/// Spectral approximation of a stationary DPP on a periodized window.
///
/// The kernel restricted to `[0, L]^d` is replaced by
/// `Σ_k lambda_k e_k(x) conj(e_k(y))` with `e_k(x) = L^{-d/2} exp(2 pi i k·x / L)`
/// and `lambda_k = phi(k / L)`, keeping the modes with `|k|_∞ ≤ K_max`.
#[derive(Debug, Clone)]
pub struct DppSampler {
    spec: LaguerreGaussianSpec,
    window: Window,
    density: SpectralDensity,
    modes: Vec<Vec<i32>>,
    eigenvalues: Vec<f64>,
    k_max: usize,
    total_mass: f64,
}

/// Summary of the truncation, echoed into output sidecars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSummary {
    pub k_max: usize,
    pub modes: usize,
    pub sum_lambda: f64,
    /// `Σ_{k ∈ Z^d} phi(k / L)`, by Poisson summation.
    pub total_mass: f64,
}

impl DppSampler {
    pub fn new(spec: &LaguerreGaussianSpec, window: Window) -> Result<Self> {
        Self::with_options(spec, window, SamplerOptions::default())
    }

    pub fn with_options(spec: &LaguerreGaussianSpec, window: Window, opts: SamplerOptions) -> Result<Self> {
        if spec.d != window.d {
            return Err(Error::InvalidArgument(format!(
                "kernel dimension {} differs from window dimension {}",
                spec.d, window.d
            )));
        }
        spec.check_existence()?;
        let density = spectral_density(spec)?;
        let total_mass = poisson_total_mass(spec, window.side);
        let (modes, eigenvalues, k_max) = truncate(&density, window, total_mass, opts.k_max_cap)?;
        Ok(Self { spec: *spec, window, density, modes, eigenvalues, k_max, total_mass })
    }

    pub fn spec(&self) -> &LaguerreGaussianSpec {
        &self.spec
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn density(&self) -> &SpectralDensity {
        &self.density
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Clipped eigenvalues of the retained modes.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Expected number of points of the approximating process.
    pub fn sum_lambda(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Variance of the number of points, `Σ lambda_k (1 - lambda_k)`.
    pub fn count_variance(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * (1.0 - l)).sum()
    }

    pub fn summary(&self) -> TruncationSummary {
        TruncationSummary {
            k_max: self.k_max,
            modes: self.modes.len(),
            sum_lambda: self.sum_lambda(),
            total_mass: self.total_mass,
        }
    }

    /// Draws one realization.
    pub fn sample(&self, seed: SeedSpec) -> Result<PointPattern> {
        let mut rng = seed.rng();
        let selected: Vec<&[i32]> = self
            .modes
            .iter()
            .zip(&self.eigenvalues)
            .filter(|(_, &lambda)| rng.random::<f64>() < lambda)
            .map(|(k, _)| k.as_slice())
            .collect();
        let coords = sample_projection(&selected, self.window, &mut rng)?;
        PointPattern::from_flat(self.window, coords)
    }

    /// Realizations for replication indices `0..count`, in index order.
    pub fn sample_many(&self, master: u64, count: usize) -> Result<Vec<PointPattern>> {
        (0..count as u64).into_par_iter().map(|i| self.sample(SeedSpec::new(master, i))).collect()
    }
}

/// One-shot convenience wrapper around [`DppSampler`].
pub fn sample_dpp(spec: &LaguerreGaussianSpec, window: Window, seed: SeedSpec) -> Result<PointPattern> {
    DppSampler::new(spec, window)?.sample(seed)
}

/// `Σ_{k ∈ Z^d} phi(k / L) = L^d Σ_{j ∈ Z^d} C(j L)`.
fn poisson_total_mass(spec: &LaguerreGaussianSpec, side: f64) -> f64 {
    let d = spec.d;
    let r_cut = spec.alpha * (spec.m as f64).sqrt() * (10.0 + spec.m as f64);
    let reach = (r_cut / side).ceil() as i64;
    let span = (2 * reach + 1) as usize;
    let mut sum = 0.0;
    for flat in 0..span.pow(d as u32) {
        let mut rem = flat;
        let mut r2 = 0.0;
        for _ in 0..d {
            let j = (rem % span) as i64 - reach;
            rem /= span;
            r2 += (j as f64 * side).powi(2);
        }
        sum += spec.radial_value(r2.sqrt());
    }
    sum * side.powi(d as i32)
}

type Truncation = (Vec<Vec<i32>>, Vec<f64>, usize);

fn truncate(density: &SpectralDensity, window: Window, total: f64, cap: usize) -> Result<Truncation> {
    let d = window.d;
    let side = window.side;
    let mut modes = Vec::new();
    let mut eigen = Vec::new();
    let mut retained = 0.0;
    for k_max in 0..=cap {
        for k in shell(d, k_max as i32) {
            let s = k.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt() / side;
            let lambda = density.radial(s);
            if lambda > 1.0 + EIGEN_SLACK {
                return Err(Error::InvalidKernel(format!(
                    "eigenvalue {lambda} > 1 at frequency {k:?}: the kernel operator leaves [0, 1]"
                )));
            }
            retained += lambda;
            if lambda > 0.0 {
                modes.push(k);
                eigen.push(lambda.clamp(0.0, 1.0));
            }
        }
        if total - retained < TRUNCATION_TOL * total {
            return Ok((modes, eigen, k_max));
        }
    }
    Err(Error::TruncationFailure(format!(
        "retained spectral mass {retained} of {total} at the cap K_max = {cap}"
    )))
}

/// Frequencies `k ∈ Z^d` with `|k|_∞ = radius`.
fn shell(d: usize, radius: i32) -> impl Iterator<Item = Vec<i32>> {
    let span = (2 * radius + 1) as usize;
    (0..span.pow(d as u32)).filter_map(move |mut flat| {
        let mut k = Vec::with_capacity(d);
        for _ in 0..d {
            k.push((flat % span) as i32 - radius);
            flat /= span;
        }
        (k.iter().map(|v| v.abs()).max() == Some(radius)).then_some(k)
    })
}

/// Sequential sampling of the projection DPP spanned by the selected Fourier
/// modes. Point `i + 1` has density proportional to the squared distance of
/// the feature vector `u(x) = (exp(2 pi i k_j·x / L))_j` from the span of the
/// features of the points already placed; it is drawn by rejection from the
/// uniform law, accepted with probability `residual / |u|²`.
fn sample_projection<R: Rng>(modes: &[&[i32]], window: Window, rng: &mut R) -> Result<Vec<f64>> {
    let n = modes.len();
    let d = window.d;
    let side = window.side;
    let mut coords = Vec::with_capacity(n * d);
    // Orthonormal basis of the span of accepted feature vectors, row-major n × n.
    let mut basis: Vec<Complex64> = Vec::with_capacity(n * n);
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut proj = vec![Complex64::new(0.0, 0.0); n];
    let mut x = vec![0.0; d];
    let norm_sq = n as f64;

    for placed in 0..n {
        loop {
            for v in x.iter_mut() {
                *v = rng.random::<f64>() * side;
            }
            for (uj, k) in u.iter_mut().zip(modes) {
                let phase: f64 = k.iter().zip(&x).map(|(&kj, &xj)| kj as f64 * xj).sum::<f64>();
                *uj = Complex64::cis(2.0 * PI * phase / side);
            }
            let mut captured = 0.0;
            for q in 0..placed {
                let row = &basis[q * n..(q + 1) * n];
                let c: Complex64 = row.iter().zip(&u).map(|(e, v)| e.conj() * v).sum();
                proj[q] = c;
                captured += c.norm_sqr();
            }
            let mut residual = norm_sq - captured;
            if residual < -NEGATIVE_GUARD * norm_sq {
                return Err(Error::Numerical(format!(
                    "negative conditional intensity {residual} while placing point {placed}"
                )));
            }
            residual = residual.max(0.0);
            if rng.random::<f64>() * norm_sq >= residual {
                continue;
            }
            // Accepted: orthogonalize twice for stability, then normalize.
            let mut w = u.clone();
            for pass in 0..2 {
                for q in 0..placed {
                    let row = &basis[q * n..(q + 1) * n];
                    let c = if pass == 0 { proj[q] } else { row.iter().zip(&w).map(|(e, v)| e.conj() * v).sum() };
                    for (wl, el) in w.iter_mut().zip(row) {
                        *wl -= c * el;
                    }
                }
            }
            let len = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if !(len > 0.0) {
                continue;
            }
            basis.extend(w.iter().map(|v| v / len));
            coords.extend_from_slice(&x);
            break;
        }
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_partition_the_box() {
        for d in 1..4 {
            let total: usize = (0..5).map(|r| shell(d, r).count()).sum();
            assert_eq!(total, 9usize.pow(d as u32));
        }
    }

    #[test]
    fn poisson_mass_is_rho_volume_for_large_window() {
        let spec = LaguerreGaussianSpec::gaussian(0.15, 10.0, 2).unwrap();
        let m = poisson_total_mass(&spec, 3.0);
        assert!((m - 90.0).abs() < 1e-9);
    }

    #[test]
    fn truncation_meets_tolerance() {
        let spec = LaguerreGaussianSpec::gaussian(0.15, 10.0, 2).unwrap();
        let s = DppSampler::new(&spec, Window::new(2, 3.0).unwrap()).unwrap();
        let sum = s.sum_lambda();
        assert!((sum - 90.0).abs() / 90.0 <= 2e-3, "{sum}");
        assert!(s.eigenvalues().iter().all(|&l| (0.0..=1.0).contains(&l)));
    }

    #[test]
    fn determinism_and_simplicity() {
        let spec = LaguerreGaussianSpec::gaussian(0.2, 2.0, 1).unwrap();
        let s = DppSampler::new(&spec, Window::new(1, 10.0).unwrap()).unwrap();
        let a = s.sample(SeedSpec::new(11, 5)).unwrap();
        let b = s.sample(SeedSpec::new(11, 5)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_simple());
        let c = s.sample(SeedSpec::new(11, 6)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_invalid_kernel_and_dimension_mismatch() {
        let bad = LaguerreGaussianSpec::gaussian(0.6, 1.0, 2).unwrap();
        assert!(matches!(DppSampler::new(&bad, Window::new(2, 3.0).unwrap()), Err(Error::InvalidKernel(_))));
        let ok = LaguerreGaussianSpec::gaussian(0.3, 1.0, 2).unwrap();
        assert!(DppSampler::new(&ok, Window::new(1, 3.0).unwrap()).is_err());
    }

    #[test]
    fn truncation_cap_reported() {
        let spec = LaguerreGaussianSpec::gaussian(0.05, 10.0, 1).unwrap();
        let out = DppSampler::with_options(&spec, Window::new(1, 50.0).unwrap(), SamplerOptions { k_max_cap: 3 });
        assert!(matches!(out, Err(Error::TruncationFailure(_))));
    }

    #[test]
    fn higher_order_kernel_samples() {
        let spec = LaguerreGaussianSpec::new(2, 0.2, 3.0, 2).unwrap();
        let s = DppSampler::new(&spec, Window::new(2, 2.0).unwrap()).unwrap();
        assert!((s.sum_lambda() - 12.0).abs() / 12.0 < 2e-3, "{}", s.sum_lambda());
        let p = s.sample(SeedSpec::new(1, 0)).unwrap();
        assert!(p.is_simple());
    }
}
