//! Hahn polynomials on `{0, ..., N}` and the identities tying them to the
//! two-dimensional kernels.

use crate::error::{invalid, Error, Result};
use crate::jacobi::{coeff_a, coeff_c};
use crate::numkit::{binomial, factorial_f, falling, hyp3f2, rising, Field};

/// `h_n(r; N) = 3F2(-n, n+theta-1, -r; alpha, -N; 1)`, orthogonal under
/// `DM_{alpha,beta}(. ; N)` with `h_n(0; N) = 1`.
pub fn univariate_hahn<F: Field>(alpha: &F, beta: &F, n: u32, r: u32, size: u32) -> Result<F> {
    if n > size {
        return Err(Error::DegreeOutOfRange { n, bound: size });
    }
    if r > size {
        return Err(invalid("r", format!("r = {r} exceeds N = {size}")));
    }
    let theta = alpha.clone() + beta;
    let a0 = F::from_i64(-(n as i64));
    let a1 = F::from_i64(n as i64) + theta - F::one();
    let a2 = F::from_i64(-(r as i64));
    let b1 = F::from_i64(-(size as i64));
    hyp3f2([&a0, &a1, &a2], [alpha, &b1], &F::one(), n)
}

/// `u_{N,n}`, the reciprocal of `sum_r h_n(r)^2 DM(r; N)`:
///
/// `1/u = (theta+N)_(n) / (C(N,n) (theta)_(n-1) (theta+2n-1)) * (beta)_(n) / (alpha)_(n)`.
pub fn u_norm<F: Field>(alpha: &F, beta: &F, size: u32, n: u32) -> Result<F> {
    if n > size {
        return Err(Error::DegreeOutOfRange { n, bound: size });
    }
    if n == 0 {
        return Ok(F::one());
    }
    let theta = alpha.clone() + beta;
    let inv = rising(&(theta.clone() + F::from_i64(size as i64)), n) * rising(beta, n)
        / (F::from_bigint(&binomial(size, n))
            * rising(&theta, n - 1)
            * (theta + F::from_i64(2 * n as i64 - 1))
            * rising(alpha, n));
    Ok(inv.recip())
}

/// Gasper's double sum for `h_n(r) h_n(s)`.
pub fn gasper_product<F: Field>(alpha: &F, beta: &F, n: u32, r: u32, s: u32, size: u32) -> Result<F> {
    if n > size {
        return Err(Error::DegreeOutOfRange { n, bound: size });
    }
    let theta = alpha.clone() + beta;
    let shifted = theta + F::from_i64(n as i64 - 1);
    let nf = F::from_i64(n as i64);
    let big = F::from_i64(size as i64);
    let (rf, sf) = (F::from_i64(r as i64), F::from_i64(s as i64));
    let (rc, sc) = (big.clone() - &rf, big.clone() - &sf);
    let mut total = F::zero();
    for l in 0..=n {
        for k in 0..=n - l {
            let nl = falling(&big, l + k);
            let num = falling(&nf, l + k)
                * rising(&shifted, l + k)
                * falling(&rf, l)
                * falling(&sf, l)
                * falling(&rc, k)
                * falling(&sc, k);
            if num.is_zero() {
                continue;
            }
            let den = factorial_f::<F>(l) * factorial_f::<F>(k) * nl.clone() * nl * rising(alpha, l) * rising(beta, k);
            let t = num / den;
            total = if (l + k) % 2 == 0 { total + t } else { total - t };
        }
    }
    let pre = rising(beta, n) / rising(alpha, n);
    Ok(if n % 2 == 0 { pre * total } else { -(pre * total) })
}

/// `b_{ml} = sum_{n=l}^{m} (N_[n] / (theta+N)_(n))^2 c_{mn} a_{nl}`, the
/// coefficients of `xi^H_m` in the `chi^H_l` basis.
pub fn connection_b<F: Field>(theta: &F, size: u32, m: u32, l: u32) -> Result<F> {
    if l > m || m > size {
        return Err(invalid("m", format!("need l <= m <= N, got l={l} m={m} N={size}")));
    }
    let big = F::from_i64(size as i64);
    let mut s = F::zero();
    for n in l..=m {
        let ratio = falling(&big, n) / rising(&(theta.clone() + &big), n);
        s = s + ratio.clone() * ratio * coeff_c(theta, m, n)? * coeff_a(theta, n, l)?;
    }
    Ok(s)
}

/// `E[xi^H_m chi^H_l]` under two independent `DM_alpha(. ; N)` draws:
/// `sum_{n <= min(m,l)} c_{mn} c_{ln} C(n+d-2, d-2)`.
pub fn cross_moment<F: Field>(theta: &F, d: usize, m: u32, l: u32) -> Result<F> {
    let mut s = F::zero();
    for n in 0..=m.min(l) {
        s = s + coeff_c(theta, m, n)? * coeff_c(theta, l, n)? * crate::jacobi::degree_dimension::<F>(d, n);
    }
    Ok(s)
}
