//! Negative association of counts in disjoint boxes and the boundary scaling
//! of the interior approximation.
//!
//! cargo run --release --example structural_checks

use stein_dpp::kernels::LaguerreGaussianSpec;
use stein_dpp::statistics::LocalStatistic;
use stein_dpp::verify::{interior_approximation_check, negative_association_check, CountBox, ExperimentConfig};

fn main() -> stein_dpp::Result<()> {
    let spec = LaguerreGaussianSpec::gaussian(0.15, 10.0, 2)?;
    let a = CountBox::new(vec![0.0, 0.0], vec![1.5, 3.0])?;
    let b = CountBox::new(vec![1.5, 0.0], vec![3.0, 3.0])?;
    let c = negative_association_check(&spec, 3.0, &a, &b, 300, 2)?;
    println!("adjacent boxes: cov = {:.4} ± {:.4}, pass = {}", c.cov_hat, c.stderr, c.pass);

    let config = ExperimentConfig {
        kernel: LaguerreGaussianSpec::gaussian(0.2, 2.0, 1)?,
        statistic: LocalStatistic::count(1, 0.25)?,
        n_list: vec![8, 16, 32],
        replications: 200,
        seed: 3,
        lambda_envelope: 1.0,
    };
    let rep = interior_approximation_check(&config)?;
    for r in &rep.rows {
        println!("n = {:>3}: Var(f - f_interior) = {:.4} ± {:.4}, ratio to n^(d-1) = {:.4}", r.n, r.var_diff_hat, r.var_diff_stderr, r.ratio);
    }
    println!("ratio spread {:.3}, within factor 3: {}", rep.ratio_spread, rep.within_factor_three);
    Ok(())
}
