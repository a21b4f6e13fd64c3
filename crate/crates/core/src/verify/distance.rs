use crate::error::{invalid, Result};
use crate::numerics::{normal_cdf, normal_cdf_antiderivative, normal_pdf, normal_quantile};

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return invalid(format!("distance estimation needs at least 2 samples, got {}", samples.len()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return invalid("samples must be finite");
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// `∫ |F_R(t) - Phi(t)| dt` for the empirical distribution `F_R` of the samples,
/// evaluated exactly piece by piece.
pub fn empirical_wasserstein_to_normal(samples: &[f64]) -> Result<f64> {
    let xs = sorted(samples)?;
    let r = xs.len();
    let g = normal_cdf_antiderivative;
    let first = xs[0];
    let last = xs[r - 1];
    // Tails: ∫_{-∞}^{x_1} Phi and ∫_{x_R}^{∞} (1 - Phi).
    let mut total = g(first) + normal_pdf(last) - last * (1.0 - normal_cdf(last));
    for k in 1..r {
        let (a, b) = (xs[k - 1], xs[k]);
        if b <= a {
            continue;
        }
        let p = k as f64 / r as f64;
        let c = normal_quantile(p).clamp(a, b);
        total += p * (c - a) - (g(c) - g(a)) + (g(b) - g(c)) - p * (b - c);
    }
    Ok(total)
}

/// `sup_t |F_R(t) - Phi(t)|`, attained at an order statistic.
pub fn empirical_kolmogorov_to_normal(samples: &[f64]) -> Result<f64> {
    let xs = sorted(samples)?;
    let r = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let phi = normal_cdf(x);
            let k = (i + 1) as f64;
            (k / r - phi).abs().max(((k - 1.0) / r - phi).abs())
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn point_masses() {
        let w = empirical_wasserstein_to_normal(&[0.0; 10]).unwrap();
        assert!((w - (2.0 / PI).sqrt()).abs() < 1e-12);
        for c in [-1.3, 0.4, 2.5] {
            let w = empirical_wasserstein_to_normal(&[c; 7]).unwrap();
            let expect = c * (2.0 * normal_cdf(c) - 1.0) + 2.0 * normal_pdf(c);
            assert!((w - expect).abs() < 1e-12, "c={c}");
        }
        assert_eq!(empirical_kolmogorov_to_normal(&[0.0; 5]).unwrap(), 0.5);
    }

    #[test]
    fn two_point_distribution_by_quadrature() {
        let xs = [-0.7, 1.1];
        let w = empirical_wasserstein_to_normal(&xs).unwrap();
        let f = |t: f64| {
            let fr = if t < -0.7 { 0.0 } else if t < 1.1 { 0.5 } else { 1.0 };
            (fr - normal_cdf(t)).abs()
        };
        let mut brute = 0.0;
        let h = 1e-4;
        let mut t = -12.0 + h / 2.0;
        while t < 12.0 {
            brute += f(t) * h;
            t += h;
        }
        assert!((w - brute).abs() < 1e-6, "{w} vs {brute}");
    }

    #[test]
    fn quantile_grid_converges() {
        let grid = |r: usize| -> Vec<f64> { (1..=r).map(|k| normal_quantile((k as f64 - 0.5) / r as f64)).collect() };
        let small = empirical_wasserstein_to_normal(&grid(100)).unwrap();
        let large = empirical_wasserstein_to_normal(&grid(10_000)).unwrap();
        assert!(large < small);
        let ks = empirical_kolmogorov_to_normal(&grid(100)).unwrap();
        assert!(ks <= 0.005 + 1e-9, "{ks}");
    }

    #[test]
    fn too_few_samples() {
        assert!(empirical_wasserstein_to_normal(&[1.0]).is_err());
        assert!(empirical_kolmogorov_to_normal(&[]).is_err());
        assert!(empirical_wasserstein_to_normal(&[1.0, f64::NAN]).is_err());
    }
}
