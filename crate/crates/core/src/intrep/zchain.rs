//! The recursive variable `Z_d` whose law represents the Jacobi kernels:
//! `Q_n^alpha(x, y) = E[Q_n^{alpha_d, |alpha|-alpha_d}(Z_d, 1)]` and
//! `E[Z_d^m] = (alpha_d)_(m) / (|alpha|)_(m) xi_m(x, y)`.
//!
//! Parameters are sorted decreasingly (ties keep their order) and `x`, `y`
//! are permuted along. With `x'_j = x_j / (x_1 + ... + x_j)`,
//! `A_j = x'_j + (1 - x'_j) sqrt(Z_{j-1})` and `X*_j = x'_j / A_j`, stage `j`
//! draws `Phi_j` from the product-formula measure with parameters
//! `(alpha_j, alpha_{j-1})` at `(X*_j, Y*_j)` and sets `Z_j = Phi_j A_j B_j`.

use super::KoornwinderSampler;
use crate::dist::{DirichletParams, RngStream, SimplexPoint};
use crate::error::{Error, Result};
use crate::jacobi::{coeff_a, xi};
use crate::numkit::mc::sharded;
use crate::numkit::rising;
use crate::numkit::stats::Estimate;

/// Decreasing order of the parameters, stable under ties.
fn decreasing_order(alpha: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..alpha.len()).collect();
    order.sort_by(|&i, &j| alpha[j].total_cmp(&alpha[i]));
    order
}

/// The region the chain accepts: after sorting, every stage `j >= 2` needs
/// `alpha_j >= 1/2`. Ordering then gives `alpha_{j-1} >= alpha_j`, so each
/// stage lies in the product-formula region.
pub fn z_chain_region(alpha: &[f64]) -> Result<()> {
    let order = decreasing_order(alpha);
    for (j, &i) in order.iter().enumerate().skip(1) {
        if alpha[i] < 0.5 {
            return Err(Error::RegionViolation {
                stage: j + 1,
                reason: format!("alpha_{} = {} is below 1/2 after decreasing sort", j + 1, alpha[i]),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZChain {
    order: Vec<usize>,
    sorted: Vec<f64>,
    stages: Vec<KoornwinderSampler>,
}

impl ZChain {
    pub fn new(alpha: &DirichletParams<f64>) -> Result<Self> {
        let a = alpha.alpha();
        z_chain_region(a)?;
        let order = decreasing_order(a);
        let sorted: Vec<f64> = order.iter().map(|&i| a[i]).collect();
        let stages = (1..sorted.len())
            .map(|j| KoornwinderSampler::new(sorted[j], sorted[j - 1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZChain { order, sorted, stages })
    }

    /// `order()[k]` is the original index of the `k`-th largest parameter.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `alpha_d`, the smallest parameter; `Z_d` is attached to it.
    pub fn last(&self) -> f64 {
        *self.sorted.last().expect("d >= 2")
    }

    pub fn total(&self) -> f64 {
        self.sorted.iter().sum()
    }

    /// `Z_1, ..., Z_d` for one draw.
    pub fn path(&self, x: &[f64], y: &[f64], rng: &mut RngStream) -> Vec<f64> {
        let mut z = 1.0f64;
        let mut out = Vec::with_capacity(self.sorted.len());
        out.push(z);
        let (mut sx, mut sy) = (x[self.order[0]], y[self.order[0]]);
        for (j, stage) in self.stages.iter().enumerate() {
            let i = self.order[j + 1];
            sx += x[i];
            sy += y[i];
            // an empty prefix leaves Z_j irrelevant to what follows; any x' works
            let xp = if sx > 0.0 { (x[i] / sx).min(1.0) } else { 1.0 };
            let yp = if sy > 0.0 { (y[i] / sy).min(1.0) } else { 1.0 };
            let w = z.sqrt();
            let (a, b) = (xp + (1.0 - xp) * w, yp + (1.0 - yp) * w);
            let xs = if a > 0.0 { (xp / a).min(1.0) } else { 1.0 };
            let ys = if b > 0.0 { (yp / b).min(1.0) } else { 1.0 };
            z = (stage.sample(xs, ys, rng) * a * b).clamp(0.0, 1.0);
            out.push(z);
        }
        out
    }

    pub fn sample(&self, x: &[f64], y: &[f64], rng: &mut RngStream) -> f64 {
        *self.path(x, y, rng).last().expect("nonempty")
    }
}

pub fn sample_z_chain(alpha: &DirichletParams<f64>, x: &SimplexPoint<f64>, y: &SimplexPoint<f64>, rng: &mut RngStream) -> Result<f64> {
    check_points(alpha, x, y)?;
    Ok(ZChain::new(alpha)?.sample(x.coords(), y.coords(), rng))
}

fn check_points(alpha: &DirichletParams<f64>, x: &SimplexPoint<f64>, y: &SimplexPoint<f64>) -> Result<()> {
    for p in [x, y] {
        if p.dim() != alpha.dim() {
            return Err(Error::DimensionMismatch { expected: alpha.dim(), got: p.dim() });
        }
    }
    Ok(())
}

/// A Monte Carlo estimate next to the exact value it should match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCheck {
    pub degree: u32,
    pub estimate: Estimate,
    pub exact: f64,
    pub z: f64,
}

impl KernelCheck {
    pub(crate) fn new(degree: u32, estimate: Estimate, exact: f64) -> Self {
        KernelCheck { degree, estimate, exact, z: estimate.z_score(exact) }
    }

    pub fn passes(&self, bound: f64) -> bool {
        self.z.abs() <= bound
    }
}

/// Coefficients of `Q_n^{a, theta-a}(z, 1) = sum_m a_{nm} (theta)_(m) / (a)_(m) z^m`.
pub(crate) fn kernel_at_one_coeffs(a: f64, theta: f64, n: u32) -> Result<Vec<f64>> {
    (0..=n).map(|m| Ok(coeff_a(&theta, n, m)? * rising(&theta, m) / rising(&a, m))).collect()
}

fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * z + v)
}

/// `E[Q_n^{alpha_d, |alpha|-alpha_d}(Z_d, 1)]` against `Q_n^alpha(x, y)` for
/// `n = 0..=nmax`, all from the same draws.
pub fn verify_kernel_representation(
    alpha: &DirichletParams<f64>,
    x: &SimplexPoint<f64>,
    y: &SimplexPoint<f64>,
    nmax: u32,
    draws: u64,
    seed: u64,
) -> Result<Vec<KernelCheck>> {
    check_points(alpha, x, y)?;
    let chain = ZChain::new(alpha)?;
    let coeffs = (0..=nmax)
        .map(|n| kernel_at_one_coeffs(chain.last(), chain.total(), n))
        .collect::<Result<Vec<_>>>()?;
    let w = sharded(draws, seed, nmax as usize + 1, |rng, buf| {
        let z = chain.sample(x.coords(), y.coords(), rng);
        for (b, c) in buf.iter_mut().zip(&coeffs) {
            *b = horner(c, z);
        }
    });
    (0..=nmax)
        .map(|n| Ok(KernelCheck::new(n, w[n as usize].estimate(), crate::jacobi::q_kernel(alpha, n, x, y)?)))
        .collect()
}

/// `E[Z_d^m]` against `(alpha_d)_(m) / (|alpha|)_(m) xi_m(x, y)` for `m = 0..=mmax`.
pub fn verify_z_moments(
    alpha: &DirichletParams<f64>,
    x: &SimplexPoint<f64>,
    y: &SimplexPoint<f64>,
    mmax: u32,
    draws: u64,
    seed: u64,
) -> Result<Vec<KernelCheck>> {
    check_points(alpha, x, y)?;
    let chain = ZChain::new(alpha)?;
    let w = sharded(draws, seed, mmax as usize + 1, |rng, buf| {
        let z = chain.sample(x.coords(), y.coords(), rng);
        let mut p = 1.0;
        for b in buf.iter_mut() {
            *b = p;
            p *= z;
        }
    });
    let (a, t) = (chain.last(), chain.total());
    (0..=mmax)
        .map(|m| {
            let exact = rising(&a, m) / rising(&t, m) * xi(alpha, m, x, y)?;
            Ok(KernelCheck::new(m, w[m as usize].estimate(), exact))
        })
        .collect()
}
