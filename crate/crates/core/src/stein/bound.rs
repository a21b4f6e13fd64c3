use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Inputs of the explicit L1 bound for standardized sums of cube variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub d: usize,
    /// Uniform bound `sup_i ‖Y_i‖_3`.
    #[serde(rename = "M")]
    pub m: f64,
    pub kappa: f64,
    pub lambda: f64,
    /// Variance rate: `Var(S_n) ≥ gamma n^d`.
    pub gamma: f64,
    pub n: u64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n == 0 {
            return invalid("bound needs d ≥ 1 and n ≥ 1");
        }
        for (name, v) in [("M", self.m), ("kappa", self.kappa), ("lambda", self.lambda), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return invalid(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }
}

/// Every constant of the bound, the block length and the three terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub mu: f64,
    pub nu: f64,
    pub theta: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub l_star: u64,
    /// False when the optimal length floors to zero and `l_star = 1` is used instead.
    pub l_star_optimal: bool,
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub total: f64,
    pub rate_exponent: f64,
}

/// `mu = e^{2λ/3} / (e^{λ/3} - 1)²`, `nu = e^{λ} / (e^{λ/3} - 1)²`.
pub fn mu_nu(lambda: f64) -> (f64, f64) {
    let em1 = (lambda / 3.0).exp_m1();
    let den = em1 * em1;
    ((2.0 * lambda / 3.0).exp() / den, lambda.exp() / den)
}

/// `(4 mu + 2 nu)^d - (2 nu)^d`, factored as `4 mu Σ_k a^{d-1-k} b^k` to
/// avoid cancellation.
fn power_gap(mu: f64, nu: f64, d: usize) -> f64 {
    let a = 4.0 * mu + 2.0 * nu;
    let b = 2.0 * nu;
    let mut sum = 0.0;
    for k in 0..d {
        sum += a.powi((d - 1 - k) as i32) * b.powi(k as i32);
    }
    4.0 * mu * sum
}

/// `d / (4d + 2)`, the polynomial rate of the bound.
pub fn rate_exponent(d: usize) -> f64 {
    d as f64 / (4 * d + 2) as f64
}

/// Exponential-rate parameter of the second and third terms:
/// `(λ/3) [sqrt(2γ) κ^{1/3} ((4μ+2ν)^d - (2ν)^d) / (18^{d+1} sqrt(π) d M)]^{1/(2d+1)}`.
pub fn theta(d: usize, m: f64, kappa: f64, gamma: f64, lambda: f64) -> f64 {
    let (mu, nu) = mu_nu(lambda);
    let df = d as f64;
    let base = (2.0 * gamma).sqrt() * kappa.cbrt() * power_gap(mu, nu, d)
        / (18f64.powi(d as i32 + 1) * PI.sqrt() * df * m);
    lambda / 3.0 * base.powf(1.0 / (2.0 * df + 1.0))
}

/// The constants `(C1, C2, C3)`.
pub fn constants(d: usize, m: f64, kappa: f64, gamma: f64, lambda: f64) -> (f64, f64, f64) {
    let (mu, nu) = mu_nu(lambda);
    let df = d as f64;
    let gap = power_gap(mu, nu, d);
    let ln_inner = 9f64.ln() + df * 36f64.ln() + (4.0 * df + 3.0) * m.ln() + 2.0 * df * gap.ln()
        - (2.0 * df + 1.5) * gamma.ln()
        - df * PI.ln();
    let two_d = 2.0 * df;
    let tail = two_d.powf(-two_d / (two_d + 1.0)) + 2.0 * two_d.powf(1.0 / (two_d + 1.0));
    let c1 = (ln_inner / (2.0 * df + 1.0)).exp() * tail;

    let th = theta(d, m, kappa, gamma, lambda);
    let c2 = 3.0 * 6f64.powi(d as i32) * kappa.cbrt() * m * m * th.powf(4.0 * df / 3.0) / (PI.sqrt() * gamma);
    let c3 = 2f64.powi(d as i32 + 1) * kappa.powf(2.0 / 3.0) * m / gamma.sqrt();
    (c1, c2, c3)
}

/// Unfloored optimal block length `l_0`.
pub fn optimal_block_length_real(d: usize, m: f64, kappa: f64, gamma: f64, lambda: f64, n: u64) -> f64 {
    let (mu, nu) = mu_nu(lambda);
    let df = d as f64;
    let base = (2.0 * gamma).sqrt() * kappa.cbrt() * power_gap(mu, nu, d) * (n as f64).powf(df / 2.0)
        / (18f64.powi(d as i32 + 1) * PI.sqrt() * m);
    base.powf(1.0 / (2.0 * df + 1.0))
}

/// `l = ⌊l_0⌋`; errors when it is zero.
pub fn optimal_block_length(d: usize, m: f64, kappa: f64, gamma: f64, lambda: f64, n: u64) -> Result<u64> {
    let l0 = optimal_block_length_real(d, m, kappa, gamma, lambda, n);
    let l = l0.floor();
    if l < 1.0 {
        return Err(Error::NTooSmall(format!("l_0 = {l0:.6} < 1 at n = {n}")));
    }
    Ok(l as u64)
}

/// Evaluates the three-term L1 bound
/// `C1 / n^{d/(4d+2)} + C2 n^{d(4d+1)/(6d+3)} e^{-θ n^{d/(4d+2)}} + C3 n^{7d/6} e^{-2θ n^{d/(4d+2)}}`.
pub fn wasserstein_bound(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    let BoundInputs { d, m, kappa, lambda, gamma, n } = *inputs;
    let df = d as f64;
    let (mu, nu) = mu_nu(lambda);
    let th = theta(d, m, kappa, gamma, lambda);
    let (c1, c2, c3) = constants(d, m, kappa, gamma, lambda);
    let (l_star, l_star_optimal) = match optimal_block_length(d, m, kappa, gamma, lambda, n) {
        Ok(l) => (l, true),
        Err(Error::NTooSmall(_)) => (1, false),
        Err(e) => return Err(e),
    };
    let e = rate_exponent(d);
    let nf = n as f64;
    let ln_n = nf.ln();
    let growth = th * nf.powf(e);
    let term1 = c1 * nf.powf(-e);
    let term2 = (c2.ln() + df * (4.0 * df + 1.0) / (6.0 * df + 3.0) * ln_n - growth).exp();
    let term3 = (c3.ln() + 7.0 * df / 6.0 * ln_n - 2.0 * growth).exp();
    Ok(BoundReport {
        inputs: *inputs,
        mu,
        nu,
        theta: th,
        c1,
        c2,
        c3,
        l_star,
        l_star_optimal,
        term1,
        term2,
        term3,
        total: term1 + term2 + term3,
        rate_exponent: e,
    })
}

/// Rate under the weaker variance growth `Var(S_n) ≥ γ n^s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxedRate {
    pub valid: bool,
    /// The bound decays like `n^{-exponent}`.
    pub exponent: f64,
}

/// Valid iff `s > (4d+2) d / (4d+3)`; exponent `(4d+3) s / (4d+2) - d`.
pub fn relaxed_rate(d: usize, s: f64) -> RelaxedRate {
    let df = d as f64;
    let threshold = (4.0 * df + 2.0) * df / (4.0 * df + 3.0);
    let exponent = if s == df { rate_exponent(d) } else { (4.0 * df + 3.0) / (4.0 * df + 2.0) * s - df };
    RelaxedRate { valid: s > threshold, exponent }
}
