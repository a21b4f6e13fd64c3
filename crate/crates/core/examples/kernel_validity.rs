//! Existence check, spectral density and decay envelope of Laguerre-Gaussian kernels.
//!
//! cargo run --example kernel_validity

use stein_dpp::kernels::{fit_decay_envelope, max_intensity_alpha, spectral_density, LaguerreGaussianSpec};

fn main() -> stein_dpp::Result<()> {
    for (m, rho, d) in [(1, 1.0, 2), (2, 1.0, 2), (3, 5.0, 1), (4, 10.0, 3)] {
        let amax = max_intensity_alpha(m, rho, d);
        println!("m={m} rho={rho} d={d}: alpha_max = {amax:.6}");
        for frac in [0.5, 0.9, 1.0, 1.1] {
            let spec = LaguerreGaussianSpec::new(m, frac * amax, rho, d)?;
            match spectral_density(&spec) {
                Ok(sd) => {
                    let env = fit_decay_envelope(&spec, 1.0)?;
                    println!(
                        "  alpha = {:.4}: valid, sup phi = {:.9}, C(0) = {rho}, envelope kappa = {:.4e} (lambda = 1)",
                        spec.alpha,
                        sd.sup(),
                        env.kappa
                    );
                }
                Err(e) => println!("  alpha = {:.4}: {e}", spec.alpha),
            }
        }
    }
    Ok(())
}
