//! Monte-Carlo verification of the normal approximation: empirical L1 and
//! Kolmogorov distances of standardized functionals to `N(0, 1)`, comparison
//! with the explicit bound at estimated parameters, and two structural checks
//! (negative association of counts, boundary scaling of the interior
//! approximation).
//!
//! Parameter estimates fed to the bound carry 3-sigma safety margins:
//! `M = max_n (M_hat + 3 se)` and `gamma = (sigma2_hat - 3 se) / n^d` at the
//! largest `n`.

mod checks;
mod distance;
mod experiment;

pub use checks::{
    count_covariance, interior_approximation_check, interior_difference_variance, negative_association_check,
    AssociationCheck, CountBox, InteriorReport, InteriorRow,
};
pub use distance::{empirical_kolmogorov_to_normal, empirical_wasserstein_to_normal};
pub use experiment::{
    estimate_moments, run_experiment, run_experiment_detailed, ExperimentConfig, ExperimentOutput, MomentEstimates,
    VerificationReport, VerificationRow, MIN_REPLICATIONS,
};
