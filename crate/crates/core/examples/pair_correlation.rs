//! Binned pair-correlation estimate of a simulated Gaussian DPP against theory.
//!
//! cargo run --release --example pair_correlation

use stein_dpp::kernels::LaguerreGaussianSpec;
use stein_dpp::sampler::{empirical_pcf, theoretical_pcf_bin, DppSampler, Window};

fn main() -> stein_dpp::Result<()> {
    let spec = LaguerreGaussianSpec::gaussian(0.15, 10.0, 2)?;
    let sampler = DppSampler::new(&spec, Window::new(2, 3.0)?)?;
    let patterns = sampler.sample_many(3, 300)?;
    let edges: Vec<f64> = (0..=10).map(|k| 0.05 * k as f64).collect();
    println!("{:>8} {:>8} {:>9} {:>8} {:>9}", "r_lo", "r_hi", "g_hat", "se", "g_theory");
    for b in empirical_pcf(&patterns, &edges)? {
        println!(
            "{:>8.3} {:>8.3} {:>9.4} {:>8.4} {:>9.4}",
            b.r_lo,
            b.r_hi,
            b.g_hat.unwrap_or(f64::NAN),
            b.stderr.unwrap_or(f64::NAN),
            theoretical_pcf_bin(&spec, b.r_lo, b.r_hi)
        );
    }
    Ok(())
}
