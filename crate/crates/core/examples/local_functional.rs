//! Local functionals, the unit-cube covering with its interior approximation,
//! and the block decomposition of the cube index set.
//!
//! cargo run --example local_functional

use stein_dpp::kernels::LaguerreGaussianSpec;
use stein_dpp::sampler::{DppSampler, SeedSpec, Window};
use stein_dpp::statistics::{
    block_decompose, block_sums, cube_variables, eval_functional, interior_index_set, restricted_functional,
    LocalStatistic, Region,
};

fn main() -> stein_dpp::Result<()> {
    let n = 12usize;
    let spec = LaguerreGaussianSpec::gaussian(0.2, 2.0, 2)?;
    let pattern = DppSampler::new(&spec, Window::new(2, n as f64)?)?.sample(SeedSpec::new(4, 0))?;
    let stat = LocalStatistic::pair_indicator(2, 0.5, 0.3)?;

    let full = eval_functional(&stat, &pattern, &Region::All);
    let interior = interior_index_set(n as f64, stat.tau(), 2)?;
    let inner = restricted_functional(&stat, &pattern, &interior);
    println!("{} points; close pairs f = {full}, interior part = {inner} over {} cubes", pattern.len(), interior.len());

    let dec = block_decompose(n, 5, 2)?;
    println!("blocks: l = {}, m = {}, r = {}, {} full-size blocks", dec.l, dec.m, dec.r, dec.main_block_count());
    let y = cube_variables(&stat, &pattern, stein_dpp::statistics::IndexBox::cube(2, 1, n as i64).iter(), 0.0);
    let sums = block_sums(&dec, &y, 1.0)?;
    for (i, xi) in sums.xi.iter().take(4) {
        println!("  block {i:?}: xi = {xi}");
    }
    println!("S_n = {}", sums.s_n);
    Ok(())
}
