//! End-to-end acceptance gate. Runs every criterion at its stated tolerance,
//! prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::time::Instant;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use stein_dpp::kernels::{laguerre, LaguerreGaussianSpec};
use stein_dpp::sampler::{empirical_pcf, DppSampler, Window};
use stein_dpp::statistics::LocalStatistic;
use stein_dpp::stein::{rate_exponent, symmetric_geom_sum, wasserstein_bound, weighted_geom_sum, BoundInputs};
use stein_dpp::verify::{
    empirical_kolmogorov_to_normal, empirical_wasserstein_to_normal, interior_approximation_check,
    negative_association_check, run_experiment, CountBox, ExperimentConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

#[derive(Deserialize)]
struct OracleRow {
    d: usize,
    lambda: f64,
    #[serde(rename = "M")]
    m: f64,
    kappa: f64,
    gamma: f64,
    n: u64,
    mu: String,
    nu: String,
    theta: String,
    c1: String,
    c2: String,
    c3: String,
    l_star: u64,
    term1: String,
    term2: String,
    term3: String,
    total: String,
}

fn constants_oracle() -> Outcome {
    let rows: Vec<OracleRow> = serde_json::from_str(include_str!("data/bound_oracle.json")).expect("oracle table");
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for o in &rows {
        let r = wasserstein_bound(&BoundInputs { d: o.d, m: o.m, kappa: o.kappa, lambda: o.lambda, gamma: o.gamma, n: o.n })
            .expect("bound");
        let pairs = [
            ("mu", r.mu, &o.mu),
            ("nu", r.nu, &o.nu),
            ("theta", r.theta, &o.theta),
            ("c1", r.c1, &o.c1),
            ("c2", r.c2, &o.c2),
            ("c3", r.c3, &o.c3),
            ("term1", r.term1, &o.term1),
            ("term2", r.term2, &o.term2),
            ("term3", r.term3, &o.term3),
            ("total", r.total, &o.total),
        ];
        for (name, got, want) in pairs {
            let want: f64 = want.parse().unwrap();
            let e = rel(got, want);
            worst = worst.max(e);
            if e > 1e-10 {
                failures.push(format!("{name} d={} lambda={} M={} k=g={} n={}: rel {e:.2e}", o.d, o.lambda, o.m, o.kappa, o.n));
            }
        }
        let l_ok = if o.l_star == 0 { r.l_star == 1 && !r.l_star_optimal } else { r.l_star == o.l_star && r.l_star_optimal };
        if !l_ok {
            failures.push(format!("l_star d={} n={}: {} vs {}", o.d, o.n, r.l_star, o.l_star));
        }
    }
    let detail = format!("{} rows, worst relative error {worst:.2e}", rows.len());
    if failures.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; {}", failures[..failures.len().min(5)].join("; ")))
    }
}

fn rate_exponent_check() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        for &(m, kg, lambda) in &[(1.0, 1.0, 1.0), (0.5, 2.0, 3.0), (2.0, 0.5, 0.5)] {
            let base = wasserstein_bound(&BoundInputs { d, m, kappa: kg, lambda, gamma: kg, n: 100 }).unwrap();
            let e = d as f64 / (4 * d + 2) as f64;
            let reference = base.term1 * 100f64.powf(e);
            for k in 2..=6 {
                let n = 10u64.pow(k);
                let r = wasserstein_bound(&BoundInputs { d, m, kappa: kg, lambda, gamma: kg, n }).unwrap();
                worst = worst.max(rel(r.term1 * (n as f64).powf(e), reference));
            }
        }
    }
    let exact = rate_exponent(1) == 1.0 / 6.0;
    outcome(worst <= 1e-12 && exact, format!("max relative drift {worst:.2e}, rate_exponent(1) == 1/6: {exact}"))
}

fn brute_weighted(n: u64, w: f64) -> f64 {
    (1..n).map(|k| (n - k) as f64 * w.powi(k as i32)).sum()
}

fn brute_symmetric(n: u64, v: f64) -> f64 {
    n as f64 + (1..n).map(|a| (n - a) as f64 * (v.powi(a as i32) + v.powi(-(a as i32)))).sum::<f64>()
}

fn summation_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w: f64 = rng.random_range(0.1..5.0);
        let v: f64 = rng.random_range(0.1..5.0);
        for n in 1..=50u64 {
            worst = worst.max(rel(weighted_geom_sum(n, w), brute_weighted(n, w)));
            worst = worst.max(rel(symmetric_geom_sum(n, v), brute_symmetric(n, v)));
        }
    }
    let unit = (1..=50u64).all(|n| weighted_geom_sum(n, 1.0) == (n * (n - 1) / 2) as f64);
    outcome(worst <= 1e-10 && unit, format!("worst relative error {worst:.2e}, w = 1 gives n(n-1)/2 exactly: {unit}"))
}

/// `L_n^s(x) = Σ_k (-1)^k C(n + s, n - k) x^k / k!` in exact rational arithmetic.
fn laguerre_exact(n: usize, s: f64, x: f64) -> f64 {
    let s = BigRational::from_float(s).unwrap();
    let x = BigRational::from_float(x).unwrap();
    let mut total = BigRational::zero();
    for k in 0..=n {
        // C(n + s, n - k) = Π_{j=1}^{n-k} (s + k + j) / j
        let mut binom = BigRational::one();
        for j in 1..=(n - k) {
            binom = binom * (s.clone() + BigRational::from_integer(BigInt::from(k + j))) / BigRational::from_integer(BigInt::from(j));
        }
        let mut term = binom;
        for i in 1..=k {
            term = term * x.clone() / BigRational::from_integer(BigInt::from(i));
        }
        if k % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    total.to_f64().unwrap()
}

fn laguerre_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s: f64 = rng.random_range(-2.0..5.0);
        let x: f64 = rng.random_range(0.0..10.0);
        for n in 0..=10 {
            worst = worst.max(rel(laguerre(n, s, x), laguerre_exact(n, s, x)));
        }
    }
    outcome(worst <= 1e-9, format!("worst relative error {worst:.2e}"))
}

fn gaussian_dpp_2d() -> (LaguerreGaussianSpec, DppSampler) {
    let spec = LaguerreGaussianSpec::gaussian(0.15, 10.0, 2).unwrap();
    let sampler = DppSampler::new(&spec, Window::new(2, 3.0).unwrap()).unwrap();
    (spec, sampler)
}

fn sampler_first_moment() -> Outcome {
    let (_, sampler) = gaussian_dpp_2d();
    let patterns = sampler.sample_many(5, 500).unwrap();
    let counts: Vec<f64> = patterns.iter().map(|p| p.len() as f64).collect();
    let r = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / r;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let se = (var / r).sqrt();
    let sum_lambda = sampler.sum_lambda();
    let trunc = (sum_lambda - 90.0).abs() / 90.0;
    let pass = (mean - sum_lambda).abs() <= 3.0 * se && trunc <= 2e-3;
    outcome(
        pass,
        format!("mean count {mean:.3} ± {se:.3}, sum lambda {sum_lambda:.4}, K_max {}, truncation error {trunc:.2e}", sampler.k_max()),
    )
}

fn pair_correlation() -> Outcome {
    let (spec, sampler) = gaussian_dpp_2d();
    let patterns = sampler.sample_many(6, 500).unwrap();
    let edges: Vec<f64> = (0..=8).map(|k| 0.45 * k as f64 / 8.0).collect();
    let bins = empirical_pcf(&patterns, &edges).unwrap();
    let alpha2 = spec.alpha * spec.alpha;
    let mut misses = Vec::new();
    let mut worst_z: f64 = 0.0;
    for b in &bins {
        // Shell average of 1 - exp(-2 r²/alpha²) with weight r, in closed form.
        let (a, c) = (b.r_lo, b.r_hi);
        let g = 1.0 - (alpha2 / 4.0) * ((-2.0 * a * a / alpha2).exp() - (-2.0 * c * c / alpha2).exp()) / ((c * c - a * a) / 2.0);
        let (gh, se) = (b.g_hat.unwrap(), b.stderr.unwrap());
        let z = (gh - g).abs() / se;
        worst_z = worst_z.max(z);
        if (gh - g).abs() > 3.0 * se {
            misses.push(format!("[{a:.3},{c:.3}): {gh:.4} vs {g:.4} (se {se:.4})"));
        }
    }
    outcome(misses.is_empty(), format!("8 bins, largest |deviation|/se = {worst_z:.2} {}", misses.join("; ")))
}

fn negative_association() -> Outcome {
    let (spec, _) = gaussian_dpp_2d();
    let a = CountBox::new(vec![0.0, 0.0], vec![1.5, 3.0]).unwrap();
    let b = CountBox::new(vec![1.5, 0.0], vec![3.0, 3.0]).unwrap();
    let c = negative_association_check(&spec, 3.0, &a, &b, 1000, 7).unwrap();
    outcome(c.pass, format!("cov {:.4} ± {:.4} (means {:.2}, {:.2})", c.cov_hat, c.stderr, c.mean_a, c.mean_b))
}

fn clt_dominance(kw_failures: &mut Vec<String>) -> Outcome {
    let config = ExperimentConfig {
        kernel: LaguerreGaussianSpec::gaussian(0.2, 2.0, 1).unwrap(),
        statistic: LocalStatistic::count(1, 0.25).unwrap(),
        n_list: vec![8, 16, 32, 64],
        replications: 1000,
        seed: 8,
        lambda_envelope: 1.0,
    };
    let report = run_experiment(&config).unwrap();
    let mut parts = Vec::new();
    for r in &report.rows {
        if let Some(e) = &r.error {
            parts.push(format!("n={}: {e}", r.n));
            continue;
        }
        parts.push(format!("n={}: w1 {:.4} <= {:.3e}", r.n, r.w1_empirical.unwrap(), r.bound.unwrap().total));
        if r.kolmogorov_consistent != Some(true) {
            kw_failures.push(format!("n={}", r.n));
        }
    }
    let first = report.rows.first().and_then(|r| r.w1_empirical);
    let last = report.rows.last().and_then(|r| r.w1_empirical);
    let trend = matches!((first, last), (Some(a), Some(b)) if b < a);
    let pass = report.all_dominated() && trend;
    outcome(pass, format!("{}; w1(64) < w1(8): {trend}; slope {:?}", parts.join(", "), report.slope.map(|s| (s * 1e3).round() / 1e3)))
}

fn estimator_calibration(kw_failures: &[String]) -> Outcome {
    let point = empirical_wasserstein_to_normal(&[0.0; 1000]).unwrap();
    let point_ok = (point - (2.0 / std::f64::consts::PI).sqrt()).abs() <= 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let draws: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
    let w1 = empirical_wasserstein_to_normal(&draws).unwrap();
    let ks = empirical_kolmogorov_to_normal(&draws).unwrap();
    let ks_ok = ks <= (2.0 * w1 / (2.0 * std::f64::consts::PI).sqrt()).sqrt() + 2.0 / draws.len() as f64;
    let pass = point_ok && w1 <= 0.02 && ks_ok && kw_failures.is_empty();
    outcome(
        pass,
        format!(
            "point mass {point:.9}, normal draws w1 {w1:.5} ks {ks:.5}, K-W consistency failures: {:?}",
            kw_failures
        ),
    )
}

fn interior_scaling() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (d, n_list) in [(1usize, vec![8usize, 16, 32]), (2, vec![4, 8, 16])] {
        let config = ExperimentConfig {
            kernel: LaguerreGaussianSpec::gaussian(0.2, 2.0, d).unwrap(),
            statistic: LocalStatistic::count(d, 0.25).unwrap(),
            n_list,
            replications: 400,
            seed: 10 + d as u64,
            lambda_envelope: 1.0,
        };
        let rep = interior_approximation_check(&config).unwrap();
        pass &= rep.within_factor_three;
        let ratios: Vec<String> = rep.rows.iter().map(|r| format!("{}:{:.3}", r.n, r.ratio)).collect();
        parts.push(format!("d={d} ratios {} spread {:.2}", ratios.join(" "), rep.ratio_spread));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let mut all = true;
    let mut report = |idx: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        all &= o.pass;
        println!("criterion {idx:>2} {:<32} {} ({secs:.2}s) {}", name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    let mut kw_failures = Vec::new();
    report(1, "bound constants oracle", &mut constants_oracle);
    report(2, "rate exponent", &mut rate_exponent_check);
    report(3, "summation identities", &mut summation_identities);
    report(4, "laguerre recurrence", &mut laguerre_oracle);
    report(5, "sampler first moment", &mut sampler_first_moment);
    report(6, "pair correlation", &mut pair_correlation);
    report(7, "negative association", &mut negative_association);
    report(8, "clt dominance", &mut || clt_dominance(&mut kw_failures));
    report(9, "wasserstein estimator", &mut || estimator_calibration(&kw_failures));
    report(10, "interior approximation scaling", &mut interior_scaling);
    if !all {
        println!("acceptance: FAIL");
        std::process::exit(1);
    }
    println!("acceptance: PASS");
}
