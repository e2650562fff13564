//! Hahn kernels as a binomial mixture over the chain variable `Z_d`:
//!
//! ```text
//! H_n(r, s) = omega_n ((theta+N)_(n) / N_[n]) E[h~_n(K; N)],
//! ```
//!
//! where `K | Z_d ~ Binomial(N, Z_d)`, `x ~ D(alpha+r)`, `y ~ D(alpha+s)`,
//! `h~_n(k; N) = E[R_n(W)]` for `W ~ Beta(a+k, b+N-k)` with
//! `(a, b) = (alpha_d, |alpha|-alpha_d)`, and
//! `omega_n = zeta_n (theta+N)_(n) / N_[n]`.

use super::zchain::{KernelCheck, ZChain};
use crate::dist::{sample_dirichlet, DirichletParams};
use crate::error::{invalid, Error, Result};
use crate::hahn::{h_kernel, HahnContext};
use crate::jacobi::{r_coefficients, zeta};
use crate::numkit::mc::sharded;
use crate::numkit::stats::Estimate;
use crate::numkit::{binomial, falling, rising, Field, MultiIndex};

/// `h~_n(k; N) = sum_j c_j (b+N-k)_(j) / (a+b+N)_(j)` where `R_n = sum_j c_j (1-x)^j`.
pub fn h_tilde<F: Field>(a: &F, b: &F, n: u32, k: u32, size: u32) -> Result<F> {
    if k > size {
        return Err(invalid("k", format!("k = {k} exceeds N = {size}")));
    }
    let top = a.clone() + b + F::from_i64(size as i64);
    let rest = b.clone() + F::from_i64((size - k) as i64);
    Ok(r_coefficients(a, b, n)
        .iter()
        .enumerate()
        .fold(F::zero(), |s, (j, c)| s + c.clone() * rising(&rest, j as u32) / rising(&top, j as u32)))
}

/// `omega_n = 1 / E[h~_n(M; N)^2] = zeta_n (theta+N)_(n) / N_[n]`.
pub fn omega<F: Field>(a: &F, b: &F, n: u32, size: u32) -> Result<F> {
    if n > size {
        return Err(Error::DegreeOutOfRange { n, bound: size });
    }
    let big = F::from_i64(size as i64);
    Ok(zeta(a, b, n) * rising(&(a.clone() + b + &big), n) / falling(&big, n))
}

fn binomial_pmf(size: u32, z: f64, out: &mut [f64]) {
    for (k, o) in out.iter_mut().enumerate() {
        let k = k as u32;
        *o = f64::from_bigint(&binomial(size, k)) * z.powi(k as i32) * (1.0 - z).powi((size - k) as i32);
    }
}

fn check_counts(alpha: &DirichletParams<f64>, r: &MultiIndex, s: &MultiIndex) -> Result<()> {
    for c in [r, s] {
        if c.dim() != alpha.dim() {
            return Err(Error::DimensionMismatch { expected: alpha.dim(), got: c.dim() });
        }
    }
    if r.total() != s.total() {
        return Err(invalid("s", format!("|r| = {} but |s| = {}", r.total(), s.total())));
    }
    Ok(())
}

/// `u_{r,s}(k)` for `k = 0..=|r|`, Rao-Blackwellized over `K | Z_d`.
pub fn hahn_mixing_weights(alpha: &DirichletParams<f64>, r: &MultiIndex, s: &MultiIndex, draws: u64, seed: u64) -> Result<Vec<Estimate>> {
    check_counts(alpha, r, s)?;
    let chain = ZChain::new(alpha)?;
    let (pr, ps) = (alpha.shifted(r), alpha.shifted(s));
    let size = r.total();
    let w = sharded(draws, seed, size as usize + 1, |rng, buf| {
        let x = sample_dirichlet(&pr, rng);
        let y = sample_dirichlet(&ps, rng);
        binomial_pmf(size, chain.sample(x.coords(), y.coords(), rng), buf);
    });
    Ok(w.iter().map(|v| v.estimate()).collect())
}

pub fn hahn_mixing_weight(alpha: &DirichletParams<f64>, r: &MultiIndex, s: &MultiIndex, k: u32, draws: u64, seed: u64) -> Result<Estimate> {
    if k > r.total() {
        return Err(invalid("k", format!("k = {k} exceeds |r| = {}", r.total())));
    }
    Ok(hahn_mixing_weights(alpha, r, s, draws, seed)?[k as usize])
}

/// The mixture side of the representation against `H_n(r, s)` for `n = 0..=nmax`.
pub fn verify_hahn_representation(
    alpha: &DirichletParams<f64>,
    r: &MultiIndex,
    s: &MultiIndex,
    nmax: u32,
    draws: u64,
    seed: u64,
) -> Result<Vec<KernelCheck>> {
    check_counts(alpha, r, s)?;
    let size = r.total();
    if nmax > size {
        return Err(Error::DegreeOutOfRange { n: nmax, bound: size });
    }
    let chain = ZChain::new(alpha)?;
    let (a, b) = (chain.last(), chain.total() - chain.last());
    let big = size as f64;
    let mut scaled = Vec::new();
    for n in 0..=nmax {
        let pre = omega(&a, &b, n, size)? * rising(&(a + b + big), n) / falling(&big, n);
        let ht = (0..=size).map(|k| h_tilde(&a, &b, n, k, size)).collect::<Result<Vec<f64>>>()?;
        scaled.push(ht.into_iter().map(|h| h * pre).collect::<Vec<f64>>());
    }
    let (pr, ps) = (alpha.shifted(r), alpha.shifted(s));
    let w = sharded(draws, seed, nmax as usize + 1, |rng, buf| {
        let x = sample_dirichlet(&pr, rng);
        let y = sample_dirichlet(&ps, rng);
        let mut pmf = vec![0.0; size as usize + 1];
        binomial_pmf(size, chain.sample(x.coords(), y.coords(), rng), &mut pmf);
        for (o, row) in buf.iter_mut().zip(&scaled) {
            *o = row.iter().zip(&pmf).map(|(h, p)| h * p).sum();
        }
    });
    let ctx = HahnContext::new(alpha.clone(), size);
    (0..=nmax)
        .map(|n| Ok(KernelCheck::new(n, w[n as usize].estimate(), h_kernel(&ctx, n, r, s)?)))
        .collect()
}
