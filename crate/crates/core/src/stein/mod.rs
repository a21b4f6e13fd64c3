//! Explicit normal-approximation bounds for local functionals of DPPs.
//!
//! Given a third-moment bound `M`, a decay envelope `(kappa, lambda)` and a
//! variance rate `gamma`, [`wasserstein_bound`] evaluates the three-term L1
//! bound on `d_W(W_n, N(0,1))` for the standardized sum over `{1..n}^d`, with
//! the block length that balances its first two terms. The auxiliary
//! inequalities used along the way are exposed for checking.

mod bound;
mod lemmas;

pub use bound::{
    constants, mu_nu, optimal_block_length, optimal_block_length_real, rate_exponent, relaxed_rate, theta,
    wasserstein_bound, BoundInputs, BoundReport, RelaxedRate,
};
pub use lemmas::{
    alpha_mixing_bound, kolmogorov_from_wasserstein, rio_cov_bound, symmetric_geom_sum, symmetric_geom_sum_direct,
    weighted_geom_sum, weighted_geom_sum_direct,
};
