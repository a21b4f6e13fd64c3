//! Evaluate the explicit L1 bound and its ingredients over a range of n.
//!
//! cargo run --example stein_bound

use stein_dpp::stein::{kolmogorov_from_wasserstein, relaxed_rate, wasserstein_bound, BoundInputs};

fn main() -> stein_dpp::Result<()> {
    for d in 1..=2 {
        println!("d = {d} (M = 1, kappa = 1, lambda = 3, gamma = 1)");
        println!("{:>10} {:>12} {:>12} {:>12} {:>12} {:>6} {:>10}", "n", "term1", "term2", "term3", "total", "l*", "kolmogorov");
        for k in 1..=8 {
            let n = 10u64.pow(k);
            let r = wasserstein_bound(&BoundInputs { d, m: 1.0, kappa: 1.0, lambda: 3.0, gamma: 1.0, n })?;
            println!(
                "{:>10} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>5}{} {:>10.3e}",
                n,
                r.term1,
                r.term2,
                r.term3,
                r.total,
                r.l_star,
                if r.l_star_optimal { " " } else { "*" },
                kolmogorov_from_wasserstein(r.total)
            );
        }
    }
    println!("(* = n too small for the optimal block length; l = 1 used)");
    for s in [0.8, 0.9, 1.0] {
        let r = relaxed_rate(1, s);
        println!("variance growth n^{s}: valid = {}, leading term ~ n^{:.4}", r.valid, -r.exponent);
    }
    Ok(())
}
