//! Small numerical helpers shared by the modules: standard-normal functions,
//! Gauss-Legendre rules, an adaptive tensor cubature and a 1-d maximizer.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};
use std::f64::consts::PI;
use std::sync::OnceLock;

fn standard_normal() -> &'static Normal {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(Normal::standard)
}

pub fn normal_cdf(t: f64) -> f64 {
    standard_normal().cdf(t)
}

pub fn normal_pdf(t: f64) -> f64 {
    standard_normal().pdf(t)
}

pub fn normal_quantile(p: f64) -> f64 {
    standard_normal().inverse_cdf(p)
}

/// Antiderivative of the standard normal CDF, `t Φ(t) + φ(t)`, vanishing at `-∞`.
pub fn normal_cdf_antiderivative(t: f64) -> f64 {
    t * normal_cdf(t) + normal_pdf(t)
}

/// `sup_t φ(t) = (2π)^{-1/2}`.
pub fn normal_density_sup() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Result of [`adaptive_cubature`].
#[derive(Debug, Clone, Copy)]
pub struct Cubature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive cubature of `f` over the box `[lo, hi]`.
///
/// Each cell is integrated with tensor Gauss-Legendre rules of orders 4 and 8;
/// their difference is the cell's error estimate. The worst cell is bisected
/// along every axis until the summed estimate drops below `tol` or the
/// evaluation budget runs out.
pub fn adaptive_cubature<F>(f: F, lo: &[f64], hi: &[f64], tol: f64, max_evals: usize) -> Cubature
where
    F: Fn(&[f64]) -> f64,
{
    let d = lo.len();
    let coarse = gauss_legendre(4);
    let fine = gauss_legendre(8);
    let mut evaluations = 0usize;
    let mut point = vec![0.0; d];

    let mut tensor = |rule: &(Vec<f64>, Vec<f64>), a: &[f64], b: &[f64], evals: &mut usize| {
        let q = rule.0.len();
        let total = q.pow(d as u32);
        let mut sum = 0.0;
        for flat in 0..total {
            let mut rem = flat;
            let mut w = 1.0;
            for j in 0..d {
                let idx = rem % q;
                rem /= q;
                let half = 0.5 * (b[j] - a[j]);
                point[j] = a[j] + half * (rule.0[idx] + 1.0);
                w *= rule.1[idx] * half;
            }
            sum += w * f(&point);
        }
        *evals += total;
        sum
    };

    struct Cell {
        lo: Vec<f64>,
        hi: Vec<f64>,
        value: f64,
        error: f64,
    }

    let mut eval_cell = |a: Vec<f64>, b: Vec<f64>, evals: &mut usize| {
        let c = tensor(&coarse, &a, &b, evals);
        let v = tensor(&fine, &a, &b, evals);
        Cell { lo: a, hi: b, value: v, error: (v - c).abs() }
    };

    let mut cells = vec![eval_cell(lo.to_vec(), hi.to_vec(), &mut evaluations)];
    loop {
        let err: f64 = cells.iter().map(|c| c.error).sum();
        let per_split = (1usize << d) * (4usize.pow(d as u32) + 8usize.pow(d as u32));
        if err <= tol || evaluations + per_split > max_evals {
            let value = cells.iter().map(|c| c.value).sum();
            return Cubature { value, error: err, evaluations };
        }
        let worst = cells
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let cell = cells.swap_remove(worst);
        for corner in 0..(1usize << d) {
            let mut a = vec![0.0; d];
            let mut b = vec![0.0; d];
            for j in 0..d {
                let mid = 0.5 * (cell.lo[j] + cell.hi[j]);
                if corner >> j & 1 == 0 {
                    a[j] = cell.lo[j];
                    b[j] = mid;
                } else {
                    a[j] = mid;
                    b[j] = cell.hi[j];
                }
            }
            cells.push(eval_cell(a, b, &mut evaluations));
        }
    }
}

/// Maximizes a function on `[a, b]`: dense grid scan followed by
/// golden-section refinement around the best grid point. Returns `(x*, f(x*))`.
pub fn maximize_on_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, grid: usize) -> (f64, f64) {
    let h = (b - a) / grid as f64;
    let (mut best_i, mut best_v) = (0usize, f(a));
    for i in 1..=grid {
        let v = f(a + h * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut lo = (a + h * (best_i as f64 - 1.0)).max(a);
    let mut hi = (a + h * (best_i as f64 + 1.0)).min(b);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let candidates = [(a + h * best_i as f64, best_v), (x1, f1), (x2, f2)];
    candidates.into_iter().max_by(|p, q| p.1.total_cmp(&q.1)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((approx - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn cubature_of_smooth_and_discontinuous_integrands() {
        let g = adaptive_cubature(|p| (-p[0] * p[0] - p[1] * p[1]).exp(), &[-6.0, -6.0], &[6.0, 6.0], 1e-12, 1_000_000);
        assert!((g.value - PI).abs() < 1e-10);
        let disc = adaptive_cubature(
            |p| if p[0] * p[0] + p[1] * p[1] <= 1.0 { 1.0 } else { 0.0 },
            &[-1.0, -1.0],
            &[1.0, 1.0],
            1e-4,
            2_000_000,
        );
        assert!((disc.value - PI).abs() < 1e-3, "{disc:?}");
    }

    #[test]
    fn maximizer_finds_interior_peak() {
        let (x, v) = maximize_on_interval(|x| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 50);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn normal_helpers() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_quantile(0.975) - 1.959963984540054).abs() < 1e-9);
        assert!((normal_cdf_antiderivative(0.0) - normal_pdf(0.0)).abs() < 1e-16);
    }
}
