//! Generalized Laguerre polynomials and real-argument binomials.

use statrs::function::gamma::ln_gamma;

/// Generalized Laguerre polynomial `L_n^s(x)`.
///
/// Evaluated with the three-term recurrence
/// `L_{k+1} = ((2k + 1 + s - x) L_k - (k + s) L_{k-1}) / (k + 1)`,
/// starting from `L_0 = 1` and `L_1 = 1 + s - x`.
pub fn laguerre(n: usize, s: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + s - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + s - x) * cur - (kf + s) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln C(a, k)` for real `a` and integer `k` with `a - k > -1`, via log-gamma.
pub fn ln_binomial(a: f64, k: usize) -> f64 {
    let k = k as f64;
    ln_gamma(a + 1.0) - ln_gamma(k + 1.0) - ln_gamma(a - k + 1.0)
}

/// `C(a, k)` for real `a ≥ k - 1` and integer `k`.
pub fn binomial(a: f64, k: usize) -> f64 {
    ln_binomial(a, k).exp()
}
