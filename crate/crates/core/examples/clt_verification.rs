//! Monte-Carlo check that the empirical L1 distance of the standardized count
//! stays below the explicit bound.
//!
//! cargo run --release --example clt_verification

use stein_dpp::kernels::LaguerreGaussianSpec;
use stein_dpp::statistics::LocalStatistic;
use stein_dpp::verify::{run_experiment, ExperimentConfig};

fn main() -> stein_dpp::Result<()> {
    let config = ExperimentConfig {
        kernel: LaguerreGaussianSpec::gaussian(0.2, 2.0, 1)?,
        statistic: LocalStatistic::count(1, 0.25)?,
        n_list: vec![8, 16, 32],
        replications: 300,
        seed: 1,
        lambda_envelope: 1.0,
    };
    let report = run_experiment(&config)?;
    println!("kappa = {:.4}, gamma bound = {:?}, M bound = {:?}", report.envelope.kappa, report.gamma_bound, report.m_bound);
    for r in &report.rows {
        println!(
            "n = {:>3}: sigma2 = {:>8.4}, w1 = {:.4}, kolmogorov = {:.4}, bound = {:.3e}, dominated = {}",
            r.n,
            r.sigma2_hat.unwrap_or(f64::NAN),
            r.w1_empirical.unwrap_or(f64::NAN),
            r.kolmogorov_empirical.unwrap_or(f64::NAN),
            r.bound.map_or(f64::NAN, |b| b.total),
            r.dominated
        );
    }
    match report.slope {
        Some(b) => println!("log-log slope of w1: {b:.4} (bound rate -{:.4})", report.rate_exponent),
        None => println!("log-log slope of w1: not available"),
    }
    Ok(())
}
