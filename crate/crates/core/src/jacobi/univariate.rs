//! Shifted Jacobi polynomials on `[0, 1]`, orthogonal under `Beta(alpha, beta)`
//! and normalized by `R_n(1) = 1`.

use crate::error::Result;
use crate::numkit::{factorial_f, hyp2f1, rising, Field};

/// `R_n^{alpha,beta}(x) = 2F1(-n, n+theta-1; beta; 1-x)`.
pub fn univariate_r<F: Field>(alpha: &F, beta: &F, n: u32, x: &F) -> Result<F> {
    let theta = alpha.clone() + beta;
    let b = F::from_i64(n as i64) + theta - F::one();
    hyp2f1(&F::from_i64(-(n as i64)), &b, beta, &(F::one() - x), n)
}

/// `zeta_n = 1 / E[R_n(X)^2]` for `X ~ Beta(alpha, beta)`:
/// `(theta+2n-1) (theta)_(n-1) (beta)_(n) / (n! (alpha)_(n))`.
pub fn zeta<F: Field>(alpha: &F, beta: &F, n: u32) -> F {
    if n == 0 {
        return F::one();
    }
    let theta = alpha.clone() + beta;
    let two_n = F::from_i64(2 * n as i64 - 1);
    (theta.clone() + two_n) * rising(&theta, n - 1) * rising(beta, n)
        / (factorial_f::<F>(n) * rising(alpha, n))
}

/// Coefficients `c_k` of `R_n(x) = sum_k c_k (1-x)^k`.
pub fn r_coefficients<F: Field>(alpha: &F, beta: &F, n: u32) -> Vec<F> {
    let theta = alpha.clone() + beta;
    let b = F::from_i64(n as i64) + theta - F::one();
    let mut c = Vec::with_capacity(n as usize + 1);
    let mut term = F::one();
    c.push(term.clone());
    for k in 0..n {
        let kf = F::from_i64(k as i64);
        term = term * (F::from_i64(k as i64 - n as i64)) * (b.clone() + &kf)
            / ((beta.clone() + &kf) * F::from_i64(k as i64 + 1));
        c.push(term.clone());
    }
    c
}

/// `zeta_n` in floating point as a product of ratios, safe for large `n`.
pub fn zeta_f64(alpha: f64, beta: f64, n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let theta = alpha + beta;
    let nf = n as f64;
    let mut z = (theta + 2.0 * nf - 1.0) / (theta + nf - 1.0);
    for k in 0..n {
        let kf = k as f64;
        z *= (theta + kf) * (beta + kf) / ((kf + 1.0) * (alpha + kf));
    }
    z
}

/// `R_0(x), ..., R_nmax(x)` by the Jacobi three-term recurrence for
/// `P_n^{(beta-1, alpha-1)}(2x - 1)`, each divided by its value at 1.
/// Stable for high degree where the hypergeometric sum cancels badly.
pub fn r_values_f64(alpha: f64, beta: f64, nmax: u32, x: f64) -> Vec<f64> {
    let a = beta - 1.0;
    let b = alpha - 1.0;
    let t = 2.0 * x - 1.0;
    let mut out = Vec::with_capacity(nmax as usize + 1);
    out.push(1.0);
    if nmax == 0 {
        return out;
    }
    let mut p_prev = 1.0;
    let mut p = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
    let mut at_one = a + 1.0;
    out.push(p / at_one);
    for n in 2..=nmax {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let c1 = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
        let c3 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        let next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
        at_one *= (a + nf) / nf;
        out.push(p / at_one);
    }
    out
}

/// Orthonormal `sqrt(zeta_n) R_n(x)`; its leading coefficient is positive.
pub fn orthonormal_f64(alpha: f64, beta: f64, n: u32, x: f64) -> f64 {
    zeta_f64(alpha, beta, n).sqrt() * r_values_f64(alpha, beta, n, x)[n as usize]
}
