//! Closed-form geometric sums and the covariance inequalities used by the bound.
//!
//! cargo run --example summation_identities

use stein_dpp::kernels::DecayEnvelope;
use stein_dpp::stein::{
    alpha_mixing_bound, rio_cov_bound, symmetric_geom_sum, symmetric_geom_sum_direct, weighted_geom_sum,
    weighted_geom_sum_direct,
};

fn main() -> stein_dpp::Result<()> {
    for (n, w) in [(5u64, 0.5), (20, 0.9), (20, 1.0), (40, 1.7)] {
        println!(
            "n = {n:>2}, w = {w}: weighted {:.12e} (direct {:.12e}), symmetric {:.12e} (direct {:.12e})",
            weighted_geom_sum(n, w),
            weighted_geom_sum_direct(n, w),
            symmetric_geom_sum(n, w),
            symmetric_geom_sum_direct(n, w)
        );
    }
    let env = DecayEnvelope { kappa: 4.0, lambda: 1.0 };
    let alpha = alpha_mixing_bound(1.0, 1.0, 5.0, &env).min(1.0);
    println!("mixing coefficient bound at distance 5: {alpha:.4e}");
    println!("covariance bound (p = q = 3, unit norms): {:.4e}", rio_cov_bound(alpha, 3.0, 3.0, 1.0, 1.0)?);
    Ok(())
}
