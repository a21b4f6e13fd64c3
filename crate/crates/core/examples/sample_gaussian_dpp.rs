//! Simulate a Gaussian DPP on [0, 3]^2 and compare counts with the eigenvalue sum.
//!
//! cargo run --release --example sample_gaussian_dpp

use stein_dpp::kernels::LaguerreGaussianSpec;
use stein_dpp::sampler::{empirical_intensity, DppSampler, SeedSpec, Window};

fn main() -> stein_dpp::Result<()> {
    let spec = LaguerreGaussianSpec::gaussian(0.15, 10.0, 2)?;
    let sampler = DppSampler::new(&spec, Window::new(2, 3.0)?)?;
    let s = sampler.summary();
    println!("K_max = {}, modes = {}, sum lambda = {:.4}, total mass = {:.4}", s.k_max, s.modes, s.sum_lambda, s.total_mass);
    println!("count variance of the truncated process = {:.4}", sampler.count_variance());

    let one = sampler.sample(SeedSpec::new(1, 0))?;
    println!("first pattern has {} points; first three:", one.len());
    for x in one.iter().take(3) {
        println!("  ({:.4}, {:.4})", x[0], x[1]);
    }

    let patterns = sampler.sample_many(1, 200)?;
    let est = empirical_intensity(&patterns)?;
    println!("intensity estimate {:.3} ± {:.3} (rho = {})", est.rho_hat, est.stderr, spec.rho);
    Ok(())
}
