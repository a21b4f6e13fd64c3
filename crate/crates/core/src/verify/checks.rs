use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::{stream_master, ExperimentConfig, TAG_ASSOCIATION, TAG_INTERIOR};
use crate::error::{invalid, Result};
use crate::kernels::LaguerreGaussianSpec;
use crate::sampler::{DppSampler, PointPattern, Window};
use crate::statistics::{eval_functional, interior_index_set, restricted_functional, CubeSet, LocalStatistic, Region};

/// Half-open box `[lo, hi)` used for counting points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl CountBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return invalid("box corners must have the same positive dimension");
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return invalid("box must have positive side lengths");
        }
        Ok(Self { lo, hi })
    }

    pub fn overlaps(&self, other: &CountBox) -> bool {
        self.lo.iter().zip(&self.hi).zip(other.lo.iter().zip(&other.hi)).all(|((a0, a1), (b0, b1))| a0 < b1 && b0 < a1)
    }

    fn inside(&self, w: &Window) -> bool {
        self.lo.len() == w.d && self.lo.iter().all(|&v| v >= 0.0) && self.hi.iter().all(|&v| v <= w.side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssociationCheck {
    pub mean_a: f64,
    pub mean_b: f64,
    pub cov_hat: f64,
    pub stderr: f64,
    /// `cov_hat ≤ 3 stderr`.
    pub pass: bool,
}

/// Sample covariance of the counts in two disjoint boxes, with its standard error.
pub fn count_covariance(patterns: &[PointPattern], a: &CountBox, b: &CountBox) -> Result<AssociationCheck> {
    if patterns.len() < 2 {
        return invalid("covariance needs at least 2 patterns");
    }
    if a.overlaps(b) {
        return invalid("boxes A and B must be disjoint");
    }
    let na: Vec<f64> = patterns.iter().map(|p| p.count_in(&a.lo, &a.hi) as f64).collect();
    let nb: Vec<f64> = patterns.iter().map(|p| p.count_in(&b.lo, &b.hi) as f64).collect();
    let r = patterns.len() as f64;
    let mean_a = na.iter().sum::<f64>() / r;
    let mean_b = nb.iter().sum::<f64>() / r;
    let prods: Vec<f64> = na.iter().zip(&nb).map(|(x, y)| (x - mean_a) * (y - mean_b)).collect();
    let cov_hat = prods.iter().sum::<f64>() / (r - 1.0);
    let pm = prods.iter().sum::<f64>() / r;
    let stderr = (prods.iter().map(|p| (p - pm).powi(2)).sum::<f64>() / (r - 1.0) / r).sqrt();
    Ok(AssociationCheck { mean_a, mean_b, cov_hat, stderr, pass: cov_hat <= 3.0 * stderr })
}

/// Simulates the DPP on `[0, side]^d` and checks that counts in disjoint boxes
/// are not positively correlated beyond noise.
pub fn negative_association_check(
    spec: &LaguerreGaussianSpec,
    side: f64,
    a: &CountBox,
    b: &CountBox,
    replications: usize,
    seed: u64,
) -> Result<AssociationCheck> {
    let window = Window::new(spec.d, side)?;
    if a.overlaps(b) {
        return invalid("boxes A and B must be disjoint");
    }
    if !a.inside(&window) || !b.inside(&window) {
        return invalid("boxes must lie inside the window");
    }
    let sampler = DppSampler::new(spec, window)?;
    let patterns = sampler.sample_many(stream_master(seed, TAG_ASSOCIATION, 0), replications)?;
    count_covariance(&patterns, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorRow {
    pub n: usize,
    /// Variance of `f(X ∩ [0, n]^d) - f_interior(X)` over replications.
    pub var_diff_hat: f64,
    pub var_diff_stderr: f64,
    /// `var_diff_hat / n^{d-1}`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorReport {
    pub rows: Vec<InteriorRow>,
    /// `max ratio / min ratio` across rows.
    pub ratio_spread: f64,
    pub within_factor_three: bool,
}

/// Monte-Carlo variance (and its standard error) of the part of the
/// functional that falls outside the given cube set.
pub fn interior_difference_variance<C>(stat: &LocalStatistic, patterns: &[PointPattern], interior: &C) -> Result<(f64, f64)>
where
    C: CubeSet + Sync + ?Sized,
{
    if patterns.len() < 2 {
        return invalid("variance needs at least 2 patterns");
    }
    let diffs: Vec<f64> = patterns
        .par_iter()
        .map(|p| eval_functional(stat, p, &Region::All) - restricted_functional(stat, p, interior))
        .collect();
    let r = diffs.len() as f64;
    let m = diffs.iter().sum::<f64>() / r;
    let sq: Vec<f64> = diffs.iter().map(|x| (x - m).powi(2)).collect();
    let var = sq.iter().sum::<f64>() / (r - 1.0);
    let sm = sq.iter().sum::<f64>() / r;
    let se = (sq.iter().map(|v| (v - sm).powi(2)).sum::<f64>() / (r - 1.0) / r).sqrt();
    Ok((var, se))
}

/// Checks that the boundary correction `f - f_interior` has variance of order
/// `n^{d-1}`: the ratio must vary by less than a factor 3 across `n_list`.
pub fn interior_approximation_check(config: &ExperimentConfig) -> Result<InteriorReport> {
    config.validate()?;
    if config.n_list.len() < 2 {
        return invalid("the interior check needs at least two window sizes");
    }
    let d = config.kernel.d;
    let mut rows = Vec::with_capacity(config.n_list.len());
    for &n in &config.n_list {
        let interior = interior_index_set(n as f64, config.statistic.tau(), d)?;
        let patterns = config.sample(TAG_INTERIOR, n)?;
        let (var, se) = interior_difference_variance(&config.statistic, &patterns, &interior)?;
        let scale = (n as f64).powi(d as i32 - 1);
        rows.push(InteriorRow { n, var_diff_hat: var, var_diff_stderr: se, ratio: var / scale });
    }
    let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let ratio_spread = if min > 0.0 { max / min } else { f64::INFINITY };
    Ok(InteriorReport { rows, ratio_spread, within_factor_three: ratio_spread < 3.0 })
}
