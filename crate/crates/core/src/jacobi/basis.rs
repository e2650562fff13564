//! Product-form orthogonal basis built from stick-breaking coordinates.
//!
//! With `s_j = 1 - sum_{i<j} x_i`, `E_j = |alpha| - sum_{i<=j} alpha_i` and
//! `N_j = sum_{i>j} k_i`, the polynomials
//!
//! ```text
//! R_k(x) = prod_{j<d} s_j^{k_j} R_{k_j}^{alpha_j, E_j + 2 N_j}(x_j / s_j)
//! ```
//!
//! are orthogonal under `D(alpha)`, and `Q_n = sum_{|k|=n} zeta_k R_k R_k`.
//! Summing over this basis avoids the alternating `a_{nm}` sums, so it is
//! the floating path for high truncation.

use super::univariate::{r_coefficients, r_values_f64, zeta, zeta_f64};
use crate::dist::{DirichletParams, SimplexPoint};
use crate::error::{invalid, Result};
use crate::numkit::{compositions, rising, Field, MultiIndex, Poly};

/// Exact (or generic) product basis for one parameter vector.
#[derive(Debug, Clone)]
pub struct ProductBasis<F> {
    alpha: DirichletParams<F>,
    /// `E_j` for `j = 0..d-1`.
    rest: Vec<F>,
}

impl<F: Field> ProductBasis<F> {
    pub fn new(alpha: &DirichletParams<F>) -> Result<Self> {
        if alpha.dim() < 2 {
            return Err(invalid("alpha", "product basis needs d >= 2"));
        }
        let mut rest = Vec::with_capacity(alpha.dim() - 1);
        let mut e = alpha.total().clone();
        for a in &alpha.alpha()[..alpha.dim() - 1] {
            e = e - a;
            rest.push(e.clone());
        }
        Ok(ProductBasis { alpha: alpha.clone(), rest })
    }

    pub fn params(&self) -> &DirichletParams<F> {
        &self.alpha
    }

    /// Index set of total degree `n`: compositions with `d - 1` parts.
    pub fn indices(&self, n: u32) -> Vec<MultiIndex> {
        compositions(self.alpha.dim() - 1, n).collect()
    }

    fn tails(k: &MultiIndex) -> Vec<u32> {
        let p = k.parts();
        let mut t = vec![0; p.len()];
        for j in (0..p.len().saturating_sub(1)).rev() {
            t[j] = t[j + 1] + p[j + 1];
        }
        t
    }

    /// `1 / E[R_k(X)^2]`.
    pub fn zeta(&self, k: &MultiIndex) -> F {
        let tails = Self::tails(k);
        let mut z = F::one();
        for (j, (&kj, &nj)) in k.parts().iter().zip(&tails).enumerate() {
            let a = &self.alpha.alpha()[j];
            let e = &self.rest[j];
            let shifted = e.clone() + F::from_i64(2 * nj as i64);
            z = z * rising(&(a.clone() + e), 2 * nj) / rising(e, 2 * nj) * zeta(a, &shifted, kj);
        }
        z
    }

    /// `R_k(x)`, a polynomial in `x` even where some `s_j` vanish.
    pub fn eval(&self, k: &MultiIndex, x: &SimplexPoint<F>) -> Result<F> {
        self.alpha.check_dim(x.dim())?;
        let tails = Self::tails(k);
        let xs = x.coords();
        let mut s = F::one();
        let mut out = F::one();
        for (j, (&kj, &nj)) in k.parts().iter().zip(&tails).enumerate() {
            let shifted = self.rest[j].clone() + F::from_i64(2 * nj as i64);
            let c = r_coefficients(&self.alpha.alpha()[j], &shifted, kj);
            let gap = s.clone() - &xs[j];
            let mut v = F::zero();
            for (i, ci) in c.iter().enumerate() {
                v = v + ci.clone() * gap.powi(i as u32) * s.powi(kj - i as u32);
            }
            out = out * v;
            s = gap;
        }
        Ok(out)
    }

    /// `R_k` as a polynomial in `d` variables.
    pub fn polynomial(&self, k: &MultiIndex) -> Poly<F> {
        let d = self.alpha.dim();
        let tails = Self::tails(k);
        let mut s = Poly::constant(d, F::one());
        let mut out = Poly::constant(d, F::one());
        for (j, (&kj, &nj)) in k.parts().iter().zip(&tails).enumerate() {
            let shifted = self.rest[j].clone() + F::from_i64(2 * nj as i64);
            let c = r_coefficients(&self.alpha.alpha()[j], &shifted, kj);
            let gap = s.sub(&Poly::var(d, j));
            let mut v = Poly::zero(d);
            for (i, ci) in c.iter().enumerate() {
                v = v.add(&gap.pow(i as u32).mul(&s.pow(kj - i as u32)).scale(ci));
            }
            out = out.mul(&v);
            s = gap;
        }
        out
    }

    /// `Q_n(x, y)` as `sum_{|k|=n} zeta_k R_k(x) R_k(y)`.
    pub fn kernel(&self, n: u32, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<F> {
        let mut total = F::zero();
        for k in self.indices(n) {
            total = total + self.zeta(&k) * self.eval(&k, x)? * self.eval(&k, y)?;
        }
        Ok(total)
    }
}

/// Floating orthonormal basis values through a fixed total degree.
///
/// Building costs one pass over the index set; evaluating at a point fills
/// `sqrt(zeta_k) R_k(x)` for every `|k| <= nmax` from per-coordinate tables.
#[derive(Debug, Clone)]
pub struct KernelTable {
    alpha: Vec<f64>,
    rest: Vec<f64>,
    nmax: u32,
    /// Indices grouped by degree, with their tails `N_j`.
    indices: Vec<Vec<(Vec<u32>, Vec<u32>)>>,
    /// `sqrt` of the per-factor norm constants, keyed by `[j][N][k]`.
    scale: Vec<Vec<Vec<f64>>>,
}

impl KernelTable {
    pub fn new(alpha: &DirichletParams<f64>, nmax: u32) -> Result<Self> {
        let d = alpha.dim();
        if d < 2 {
            return Err(invalid("alpha", "kernel tables need d >= 2"));
        }
        let a = alpha.alpha().to_vec();
        let mut rest = Vec::with_capacity(d - 1);
        let mut e = *alpha.total();
        for ai in &a[..d - 1] {
            e -= ai;
            // E_j >= alpha_d; the clamp only absorbs rounding
            rest.push(e.max(a[d - 1]));
        }
        rest[d - 2] = a[d - 1];
        let mut indices = Vec::with_capacity(nmax as usize + 1);
        for n in 0..=nmax {
            let group = compositions(d - 1, n)
                .map(|k| {
                    let tails = ProductBasis::<f64>::tails(&k);
                    (k.parts().to_vec(), tails)
                })
                .collect();
            indices.push(group);
        }
        let nm = nmax as usize;
        let mut scale = Vec::with_capacity(d - 1);
        for j in 0..d - 1 {
            let mut by_n = Vec::with_capacity(nm + 1);
            for big_n in 0..=nm {
                // (a+E)_(2N) / (E)_(2N) as a product of ratios
                let mut ratio = 1.0;
                for i in 0..2 * big_n {
                    ratio *= (a[j] + rest[j] + i as f64) / (rest[j] + i as f64);
                }
                let shifted = rest[j] + 2.0 * big_n as f64;
                by_n.push(
                    (0..=(nm - big_n) as u32)
                        .map(|k| (ratio * zeta_f64(a[j], shifted, k)).sqrt())
                        .collect(),
                );
            }
            scale.push(by_n);
        }
        Ok(KernelTable { alpha: a, rest, nmax, indices, scale })
    }

    pub fn nmax(&self) -> u32 {
        self.nmax
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Number of basis functions of degree `n`.
    pub fn count(&self, n: u32) -> usize {
        self.indices[n as usize].len()
    }

    /// `sqrt(zeta_k) R_k(x)` grouped by degree, in the order of
    /// [`ProductBasis::indices`].
    pub fn orthonormal_values(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let d = self.alpha.len();
        let nm = self.nmax as usize;
        // s_j from tail sums, which stay accurate near faces
        let mut s = vec![0.0; d];
        let mut acc = 0.0;
        for j in (0..d).rev() {
            acc += x[j];
            s[j] = acc;
        }
        // fac[j][N][k] = sqrt(scale) s_j^k R_k^{a_j, E_j+2N}(x_j / s_j)
        let mut fac: Vec<Vec<Vec<f64>>> = Vec::with_capacity(d - 1);
        for j in 0..d - 1 {
            let sj = s[j];
            let mut by_n = Vec::with_capacity(nm + 1);
            for big_n in 0..=nm {
                let kmax = (nm - big_n) as u32;
                let sc = &self.scale[j][big_n];
                let vals: Vec<f64> = if sj <= 0.0 {
                    (0..=kmax).map(|k| if k == 0 { sc[0] } else { 0.0 }).collect()
                } else {
                    let u = (x[j] / sj).clamp(0.0, 1.0);
                    let r = r_values_f64(self.alpha[j], self.rest[j] + 2.0 * big_n as f64, kmax, u);
                    let mut p = 1.0;
                    r.iter()
                        .enumerate()
                        .map(|(k, rk)| {
                            let v = sc[k] * p * rk;
                            p *= sj;
                            v
                        })
                        .collect()
                };
                by_n.push(vals);
            }
            fac.push(by_n);
        }
        self.indices
            .iter()
            .map(|group| {
                group
                    .iter()
                    .map(|(k, tails)| {
                        k.iter()
                            .zip(tails)
                            .enumerate()
                            .map(|(j, (&kj, &nj))| fac[j][nj as usize][kj as usize])
                            .product()
                    })
                    .collect()
            })
            .collect()
    }

    /// `Q_0(x, y), ..., Q_nmax(x, y)`.
    pub fn kernels(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let fx = self.orthonormal_values(x);
        let fy = self.orthonormal_values(y);
        Self::kernels_from(&fx, &fy)
    }

    /// Degree-wise inner products of two precomputed value sets.
    pub fn kernels_from(fx: &[Vec<f64>], fy: &[Vec<f64>]) -> Vec<f64> {
        fx.iter()
            .zip(fy)
            .map(|(a, b)| a.iter().zip(b).map(|(u, v)| u * v).sum())
            .collect()
    }
}
