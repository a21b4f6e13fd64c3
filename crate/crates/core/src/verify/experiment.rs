use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::distance::{empirical_kolmogorov_to_normal, empirical_wasserstein_to_normal};
use crate::error::{invalid, Error, Result};
use crate::kernels::{fit_decay_envelope, DecayEnvelope, LaguerreGaussianSpec};
use crate::sampler::{derive_master, DppSampler, PointPattern, Window};
use crate::statistics::{cube_contributions, eval_functional, interior_index_set, LocalStatistic, Region};
use crate::stein::{kolmogorov_from_wasserstein, rate_exponent, wasserstein_bound, BoundInputs, BoundReport};

/// Minimum replications for distance estimation.
pub const MIN_REPLICATIONS: usize = 100;

/// Seed-stream labels, so that different checks never share random streams.
pub(crate) const TAG_CLT: u64 = 1;
pub(crate) const TAG_INTERIOR: u64 = 2;
pub(crate) const TAG_ASSOCIATION: u64 = 3;

pub(crate) fn stream_master(seed: u64, tag: u64, n: u64) -> u64 {
    derive_master(derive_master(seed, tag), n)
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kernel: LaguerreGaussianSpec,
    pub statistic: LocalStatistic,
    /// Window sides; patterns live on `[0, n]^d`.
    pub n_list: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub lambda_envelope: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return invalid("n_list must not be empty");
        }
        if self.n_list[0] == 0 || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("n_list must be strictly increasing positive integers");
        }
        if self.replications < 2 {
            return invalid("at least 2 replications are required");
        }
        if !(self.lambda_envelope > 0.0 && self.lambda_envelope.is_finite()) {
            return invalid("lambda_envelope must be positive and finite");
        }
        if self.statistic.dimension() != self.kernel.d {
            return invalid(format!(
                "statistic dimension {} does not match kernel dimension {}",
                self.statistic.dimension(),
                self.kernel.d
            ));
        }
        self.kernel.check_existence()
    }

    pub(crate) fn sample(&self, tag: u64, n: usize) -> Result<Vec<PointPattern>> {
        let window = Window::new(self.kernel.d, n as f64)?;
        let sampler = DppSampler::new(&self.kernel, window)?;
        sampler.sample_many(stream_master(self.seed, tag, n as u64), self.replications)
    }
}

/// Monte-Carlo moments of the functional on one window size.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimates {
    pub n: usize,
    /// `f(X ∩ [0, n]^d)` per replication.
    pub values: Vec<f64>,
    pub mean_hat: f64,
    pub sigma2_hat: f64,
    pub sigma2_stderr: f64,
    /// Mean of `f_{C_i}` pooled over interior cubes.
    pub mean_per_cube: f64,
    pub mean_per_cube_stderr: f64,
    /// `max_i (mean |Y_i|³)^{1/3}` over interior cubes.
    pub m_hat: f64,
    pub m_hat_stderr: f64,
    /// `sigma2_hat / n^d`.
    pub gamma_hat: f64,
    /// All replications gave the same value.
    pub degenerate: bool,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Standard error of the mean of `xs`.
fn stderr_of_mean(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    (sample_variance(xs, mean(xs)) / xs.len() as f64).sqrt()
}

pub fn estimate_moments(config: &ExperimentConfig, n: usize, patterns: &[PointPattern]) -> Result<MomentEstimates> {
    let stat = &config.statistic;
    let d = config.kernel.d;
    if patterns.len() < 2 {
        return invalid("moment estimation needs at least 2 patterns");
    }
    let interior: Vec<Vec<i64>> = interior_index_set(n as f64, stat.tau(), d)?.iter().collect();

    let per_rep: Vec<(f64, Vec<f64>)> = patterns
        .par_iter()
        .map(|p| {
            let f = eval_functional(stat, p, &Region::All);
            let contrib = cube_contributions(stat, p);
            let cubes = interior.iter().map(|i| contrib.get(i).copied().unwrap_or(0.0)).collect();
            (f, cubes)
        })
        .collect();

    let values: Vec<f64> = per_rep.iter().map(|(f, _)| *f).collect();
    let mean_hat = mean(&values);
    let sigma2_hat = sample_variance(&values, mean_hat);
    let sq_dev: Vec<f64> = values.iter().map(|x| (x - mean_hat).powi(2)).collect();
    let sigma2_stderr = stderr_of_mean(&sq_dev);
    let degenerate = values.iter().all(|&v| v == values[0]);

    let cube_avgs: Vec<f64> = per_rep.iter().map(|(_, c)| mean(c)).collect();
    let mean_per_cube = mean(&cube_avgs);
    let mean_per_cube_stderr = stderr_of_mean(&cube_avgs);

    let mut best = (0.0f64, 0.0f64);
    for k in 0..interior.len() {
        let cubed: Vec<f64> = per_rep.iter().map(|(_, c)| (c[k] - mean_per_cube).abs().powi(3)).collect();
        let m3 = mean(&cubed);
        if m3 > best.0 {
            best = (m3, stderr_of_mean(&cubed));
        }
    }
    let (m3, m3_se) = best;
    let m_hat = m3.cbrt();
    let m_hat_stderr = if m3 > 0.0 { m3_se / (3.0 * m3.powf(2.0 / 3.0)) } else { 0.0 };

    Ok(MomentEstimates {
        n,
        values,
        mean_hat,
        sigma2_hat,
        sigma2_stderr,
        mean_per_cube,
        mean_per_cube_stderr,
        m_hat,
        m_hat_stderr,
        gamma_hat: sigma2_hat / (n as f64).powi(d as i32),
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub n: usize,
    pub sigma2_hat: Option<f64>,
    pub sigma2_stderr: Option<f64>,
    pub mean_per_cube: Option<f64>,
    pub m_hat: Option<f64>,
    pub m_hat_stderr: Option<f64>,
    /// `sigma2_hat / n^d` at this `n`.
    pub gamma_hat: Option<f64>,
    pub w1_empirical: Option<f64>,
    pub kolmogorov_empirical: Option<f64>,
    /// `K ≤ sqrt(2 (2 pi)^{-1/2} W1) + 2 / R`.
    pub kolmogorov_consistent: Option<bool>,
    pub bound: Option<BoundReport>,
    /// `w1_empirical ≤ bound.total`; false when either is missing.
    pub dominated: bool,
    pub error: Option<String>,
}

impl VerificationRow {
    fn failed(n: usize, err: &Error) -> Self {
        Self {
            n,
            sigma2_hat: None,
            sigma2_stderr: None,
            mean_per_cube: None,
            m_hat: None,
            m_hat_stderr: None,
            gamma_hat: None,
            w1_empirical: None,
            kolmogorov_empirical: None,
            kolmogorov_consistent: None,
            bound: None,
            dominated: false,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kernel: LaguerreGaussianSpec,
    pub replications: usize,
    pub seed: u64,
    pub envelope: DecayEnvelope,
    /// Raw `sigma2_hat / n^d` at the largest `n`.
    pub gamma_hat: Option<f64>,
    /// `(sigma2_hat - 3 se) / n^d` at the largest `n`, fed to the bound.
    pub gamma_bound: Option<f64>,
    /// `max_n (M_hat + 3 se)`, fed to the bound.
    pub m_bound: Option<f64>,
    pub rows: Vec<VerificationRow>,
    /// Least-squares slope of `ln w1_empirical` against `ln n`.
    pub slope: Option<f64>,
    /// Reference rate `d / (4d + 2)`; the slope is not expected to match it.
    pub rate_exponent: f64,
}

impl VerificationReport {
    pub fn all_dominated(&self) -> bool {
        self.rows.iter().all(|r| r.dominated)
    }
}

/// Report plus the standardized values `W_n` of every replication, per row.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: VerificationReport,
    pub standardized: Vec<Option<Vec<f64>>>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<VerificationReport> {
    run_experiment_detailed(config).map(|o| o.report)
}

pub fn run_experiment_detailed(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    if config.replications < MIN_REPLICATIONS {
        return invalid(format!(
            "distance estimation needs at least {MIN_REPLICATIONS} replications, got {}",
            config.replications
        ));
    }
    let d = config.kernel.d;
    let envelope = fit_decay_envelope(&config.kernel, config.lambda_envelope)?;

    let estimates: Vec<Result<MomentEstimates>> = config
        .n_list
        .iter()
        .map(|&n| {
            let patterns = config.sample(TAG_CLT, n)?;
            estimate_moments(config, n, &patterns)
        })
        .collect();

    let largest = estimates.last().expect("n_list is nonempty");
    let (gamma_hat, gamma_bound) = match largest {
        Ok(e) if !e.degenerate => {
            let nd = (e.n as f64).powi(d as i32);
            let lower = (e.sigma2_hat - 3.0 * e.sigma2_stderr) / nd;
            (Some(e.gamma_hat), (lower > 0.0).then_some(lower))
        }
        _ => (None, None),
    };
    let m_bound = estimates
        .iter()
        .filter_map(|e| e.as_ref().ok())
        .map(|e| e.m_hat + 3.0 * e.m_hat_stderr)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        .filter(|&m| m > 0.0);

    let r = config.replications as f64;
    let mut rows = Vec::with_capacity(estimates.len());
    let mut standardized = Vec::with_capacity(estimates.len());
    for (est, &n) in estimates.iter().zip(&config.n_list) {
        let e = match est {
            Ok(e) => e,
            Err(err) => {
                rows.push(VerificationRow::failed(n, err));
                standardized.push(None);
                continue;
            }
        };
        let mut row = VerificationRow {
            n,
            sigma2_hat: Some(e.sigma2_hat),
            sigma2_stderr: Some(e.sigma2_stderr),
            mean_per_cube: Some(e.mean_per_cube),
            m_hat: Some(e.m_hat),
            m_hat_stderr: Some(e.m_hat_stderr),
            gamma_hat: Some(e.gamma_hat),
            w1_empirical: None,
            kolmogorov_empirical: None,
            kolmogorov_consistent: None,
            bound: None,
            dominated: false,
            error: None,
        };
        if e.degenerate {
            row.error = Some(Error::DegenerateVariance(format!("all {} replications are equal at n = {n}", e.values.len())).to_string());
            rows.push(row);
            standardized.push(None);
            continue;
        }
        let sigma = e.sigma2_hat.sqrt();
        let w: Vec<f64> = e.values.iter().map(|v| (v - e.mean_hat) / sigma).collect();
        let w1 = empirical_wasserstein_to_normal(&w)?;
        let ks = empirical_kolmogorov_to_normal(&w)?;
        row.w1_empirical = Some(w1);
        row.kolmogorov_empirical = Some(ks);
        row.kolmogorov_consistent = Some(ks <= kolmogorov_from_wasserstein(w1) + 2.0 / r);
        match (gamma_bound, m_bound) {
            (Some(gamma), Some(m)) => {
                let inputs = BoundInputs { d, m, kappa: envelope.kappa, lambda: envelope.lambda, gamma, n: n as u64 };
                match wasserstein_bound(&inputs) {
                    Ok(b) => {
                        row.dominated = w1 <= b.total;
                        row.bound = Some(b);
                    }
                    Err(err) => row.error = Some(err.to_string()),
                }
            }
            _ => {
                row.error = Some(
                    Error::DegenerateVariance("variance or moment estimate at the largest n is not positive after the 3-sigma margin".into())
                        .to_string(),
                )
            }
        }
        rows.push(row);
        standardized.push(Some(w));
    }

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.w1_empirical.filter(|&w| w > 0.0).map(|w| ((r.n as f64).ln(), w.ln())))
        .collect();
    let slope = least_squares_slope(&pts);

    Ok(ExperimentOutput {
        report: VerificationReport {
            kernel: config.kernel,
            replications: config.replications,
            seed: config.seed,
            envelope,
            gamma_hat,
            gamma_bound,
            m_bound,
            rows,
            slope,
            rate_exponent: rate_exponent(d),
        },
        standardized,
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
