use std::f64::consts::PI;

use quadrature::double_exponential;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::pattern::{PointPattern, Window};
use crate::error::{invalid, Result};
use crate::kernels::StationaryKernel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityEstimate {
    pub rho_hat: f64,
    pub stderr: f64,
}

fn common_window(patterns: &[PointPattern]) -> Result<Window> {
    let Some(first) = patterns.first() else {
        return invalid("no patterns supplied");
    };
    let w = *first.window();
    if patterns.iter().any(|p| *p.window() != w) {
        return invalid("patterns do not share a common window");
    }
    Ok(w)
}

pub(crate) fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Mean count per unit volume over replications, with its standard error.
pub fn empirical_intensity(patterns: &[PointPattern]) -> Result<IntensityEstimate> {
    let w = common_window(patterns)?;
    let counts: Vec<f64> = patterns.iter().map(|p| p.len() as f64).collect();
    let (mean, se) = mean_and_stderr(&counts);
    let v = w.volume();
    Ok(IntensityEstimate { rho_hat: mean / v, stderr: se / v })
}

/// One bin of a pair-correlation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcfBin {
    pub r_lo: f64,
    pub r_hi: f64,
    /// `None` when no pattern holds two or more points.
    pub g_hat: Option<f64>,
    pub stderr: Option<f64>,
    /// Ordered pairs falling in the bin, summed over replications.
    pub pairs: u64,
}

/// Volume of the unit ball in `R^d`.
pub(crate) fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

/// Translation-corrected pair-correlation estimate.
///
/// For each replication and bin `[r_lo, r_hi)`,
/// `g_b = Σ_{i ≠ j, |x_i - x_j| ∈ b} 1 / |W ∩ (W + x_i - x_j)| / (rho_hat² |shell_b|)`
/// with `rho_hat` pooled over replications; the reported value is the mean over
/// replications and the standard error their spread.
pub fn empirical_pcf(patterns: &[PointPattern], edges: &[f64]) -> Result<Vec<PcfBin>> {
    let w = common_window(patterns)?;
    if edges.len() < 3 {
        return invalid("pair correlation needs at least two bins (three edges)");
    }
    if edges[0] < 0.0 || edges.windows(2).any(|e| !(e[1] > e[0])) {
        return invalid("bin edges must be nonnegative and strictly increasing");
    }
    let diameter = w.side * (w.d as f64).sqrt();
    if *edges.last().unwrap() > diameter {
        return invalid(format!("last bin edge exceeds the window diameter {diameter}"));
    }
    let bins = edges.len() - 1;
    let r_max = edges[bins];
    let d = w.d;
    let shells: Vec<f64> = edges
        .windows(2)
        .map(|e| unit_ball_volume(d) * (e[1].powi(d as i32) - e[0].powi(d as i32)))
        .collect();

    let total_points: usize = patterns.iter().map(|p| p.len()).sum();
    let rho_hat = total_points as f64 / (patterns.len() as f64 * w.volume());
    let any_pairs = patterns.iter().any(|p| p.len() >= 2);

    let mut per_rep = vec![vec![0.0; patterns.len()]; bins];
    let mut pair_counts = vec![0u64; bins];
    for (rep, p) in patterns.iter().enumerate() {
        for i in 0..p.len() {
            let xi = p.point(i);
            for j in (i + 1)..p.len() {
                let xj = p.point(j);
                let mut r2 = 0.0;
                let mut overlap = 1.0;
                for k in 0..d {
                    let dx = (xi[k] - xj[k]).abs();
                    r2 += dx * dx;
                    overlap *= w.side - dx;
                }
                let r = r2.sqrt();
                if r >= r_max || r < edges[0] || overlap <= 0.0 {
                    continue;
                }
                let b = edges.partition_point(|&e| e <= r) - 1;
                // Both orderings (i, j) and (j, i).
                per_rep[b][rep] += 2.0 / overlap;
                pair_counts[b] += 2;
            }
        }
    }

    Ok((0..bins)
        .map(|b| {
            let (g_hat, stderr) = if any_pairs {
                let norm = rho_hat * rho_hat * shells[b];
                let vals: Vec<f64> = per_rep[b].iter().map(|v| v / norm).collect();
                let (m, se) = mean_and_stderr(&vals);
                (Some(m), Some(se))
            } else {
                (None, None)
            };
            PcfBin { r_lo: edges[b], r_hi: edges[b + 1], g_hat, stderr, pairs: pair_counts[b] }
        })
        .collect())
}

/// Theoretical pair correlation `g(r) = 1 - C(r)² / rho²` of a DPP with
/// stationary kernel `C`.
pub fn theoretical_pcf<K: StationaryKernel + ?Sized>(kernel: &K, r: f64) -> f64 {
    let c = kernel.radial_value(r) / kernel.intensity();
    1.0 - c * c
}

/// Average of the theoretical `g` over the shell `r_lo ≤ |z| < r_hi`, which is
/// what the binned estimator targets.
pub fn theoretical_pcf_bin<K: StationaryKernel + ?Sized>(kernel: &K, r_lo: f64, r_hi: f64) -> f64 {
    let d = kernel.dimension() as i32;
    let weight = |r: f64| r.powi(d - 1);
    let num = double_exponential::integrate(|r| weight(r) * theoretical_pcf(kernel, r), r_lo, r_hi, 1e-13);
    let den = (r_hi.powi(d) - r_lo.powi(d)) / d as f64;
    num.integral / den
}
