use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::kernels::DecayEnvelope;

/// Covariance inequality for strongly mixing variables:
/// `|Cov(X, Y)| ≤ alpha^{1/r} ‖X‖_p ‖Y‖_q` with `1/r = 1 - 1/p - 1/q`.
pub fn rio_cov_bound(alpha: f64, p: f64, q: f64, norm_x: f64, norm_y: f64) -> Result<f64> {
    if !(p > 1.0 && q > 1.0) {
        return invalid(format!("exponents must exceed 1, got p = {p}, q = {q}"));
    }
    let inv_r = 1.0 - 1.0 / p - 1.0 / q;
    if !(inv_r > 0.0) {
        return invalid(format!("need 1/p + 1/q < 1, got {}", 1.0 / p + 1.0 / q));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return invalid(format!("mixing coefficient must lie in [0, 1], got {alpha}"));
    }
    if norm_x < 0.0 || norm_y < 0.0 {
        return invalid("norms must be nonnegative");
    }
    Ok(alpha.powf(inv_r) * norm_x * norm_y)
}

/// Mixing coefficient bound `a b kappa e^{-lambda c}` between regions of volumes
/// `a` and `b` separated by distance `c`.
pub fn alpha_mixing_bound(a: f64, b: f64, c: f64, envelope: &DecayEnvelope) -> f64 {
    a * b * envelope.at(c)
}

/// `Σ_{k=1}^{n-1} (n - k) w^k` by direct summation.
pub fn weighted_geom_sum_direct(n: u64, w: f64) -> f64 {
    let mut acc = 0.0;
    let mut pw = 1.0;
    for k in 1..n {
        pw *= w;
        acc += (n - k) as f64 * pw;
    }
    acc
}

/// `n + Σ_{a=1}^{n-1} (n - a) (v^a + v^{-a})` by direct summation.
pub fn symmetric_geom_sum_direct(n: u64, v: f64) -> f64 {
    n as f64 + weighted_geom_sum_direct(n, v) + weighted_geom_sum_direct(n, 1.0 / v)
}

/// Below this distance from 1 the closed forms lose digits to cancellation and
/// the direct sums are used.
const NEAR_ONE: f64 = 1e-2;

/// `Σ_{k=1}^{n-1} (n - k) w^k = w ((n - 1) - n w + w^n) / (w - 1)²`.
pub fn weighted_geom_sum(n: u64, w: f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    if (w - 1.0).abs() < NEAR_ONE {
        return weighted_geom_sum_direct(n, w);
    }
    let nf = n as f64;
    w * ((nf - 1.0) - nf * w + w.powf(nf)) / ((w - 1.0) * (w - 1.0))
}

/// `n + Σ_{a=1}^{n-1} (n - a) (v^a + v^{-a}) = v^{1-n} (v^n - 1)² / (v - 1)²`.
pub fn symmetric_geom_sum(n: u64, v: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if (v - 1.0).abs() < NEAR_ONE {
        return symmetric_geom_sum_direct(n, v);
    }
    let nf = n as f64;
    let vn1 = (nf * v.ln()).exp_m1();
    v.powf(1.0 - nf) * vn1 * vn1 / ((v - 1.0) * (v - 1.0))
}

/// Kolmogorov distance implied by an L1 distance to the standard normal:
/// `sqrt(2 (2 pi)^{-1/2} w1)`.
pub fn kolmogorov_from_wasserstein(w1: f64) -> f64 {
    (2.0 * w1 / (2.0 * PI).sqrt()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rio_reference_and_domain() {
        let v = rio_cov_bound(0.01, 3.0, 3.0, 2.0, 5.0).unwrap();
        assert!((v - 0.01f64.powf(1.0 / 3.0) * 10.0).abs() < 1e-14);
        assert_eq!(rio_cov_bound(0.0, 3.0, 3.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(rio_cov_bound(0.1, 2.0, 2.0, 1.0, 1.0).is_err());
        assert!(rio_cov_bound(0.1, 1.0, 4.0, 1.0, 1.0).is_err());
        assert!(rio_cov_bound(1.5, 3.0, 3.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn sums_small_cases() {
        assert_eq!(weighted_geom_sum(1, 0.3), 0.0);
        assert!((weighted_geom_sum(2, 0.3) - 0.3).abs() < 1e-15);
        assert!((weighted_geom_sum(3, 0.5) - 1.25).abs() < 1e-14);
        assert_eq!(symmetric_geom_sum(1, 3.0), 1.0);
        assert!((symmetric_geom_sum(2, 2.0) - 4.5).abs() < 1e-14);
        assert_eq!(weighted_geom_sum(10, 1.0), 45.0);
        assert_eq!(symmetric_geom_sum(10, 1.0), 100.0);
    }

    #[test]
    fn closed_forms_match_direct_sums() {
        for n in 1..40u64 {
            for &w in &[0.05, 0.3, 0.9, 0.985, 0.999, 1.001, 1.02, 1.5, 3.0] {
                let a = weighted_geom_sum(n, w);
                let b = weighted_geom_sum_direct(n, w);
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "n={n} w={w}");
                let c = symmetric_geom_sum(n, w);
                let e = symmetric_geom_sum_direct(n, w);
                assert!((c - e).abs() <= 1e-10 * e.abs().max(1.0), "n={n} v={w}");
            }
        }
    }

    #[test]
    fn kolmogorov_conversion() {
        assert_eq!(kolmogorov_from_wasserstein(0.0), 0.0);
        let w = 0.02;
        let k = kolmogorov_from_wasserstein(w);
        assert!((k * k - 2.0 * w / (2.0 * PI).sqrt()).abs() < 1e-16);
    }

    #[test]
    fn mixing_bound_is_product_with_envelope() {
        let env = DecayEnvelope { kappa: 2.0, lambda: 0.5 };
        let v = alpha_mixing_bound(3.0, 4.0, 2.0, &env);
        assert!((v - 24.0 * (-1.0f64).exp()).abs() < 1e-13);
    }
}
