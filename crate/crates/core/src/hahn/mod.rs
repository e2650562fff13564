//! Hahn polynomial kernels on the Dirichlet-Multinomial.
//!
//! For `|r| = |s| = N` the kernel of degree `n` is
//!
//! ```text
//! H_n(r, s) = (|alpha|+N)_(n) / N_[n] * sum_{m<=n} a_{nm} xi^H_m(r, s),
//! xi^H_m(r, s) = sum_{|l|=m} DM_{alpha+r}(l; m) DM_{alpha+s}(l; m) / DM_alpha(l; m),
//! ```
//!
//! the Jacobi kernel averaged over the posteriors `D(alpha+r)` and
//! `D(alpha+s)`. The same formulas with `alpha = -c` give kernels for the
//! multivariate hypergeometric distribution.

mod univariate;

pub use univariate::{connection_b, cross_moment, gasper_product, u_norm, univariate_hahn};

use crate::dist::DirichletParams;
use crate::error::{invalid, Error, Result};
use crate::jacobi::coeff_a_unchecked;
use crate::numkit::{factorial_f, falling, rising, truncated_product, Field, MultiIndex};

/// Parameters and sample size shared by every Hahn kernel evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct HahnContext<F> {
    alpha: DirichletParams<F>,
    size: u32,
}

impl<F: Field> HahnContext<F> {
    pub fn new(alpha: DirichletParams<F>, size: u32) -> Self {
        HahnContext { alpha, size }
    }

    pub fn alpha(&self) -> &DirichletParams<F> {
        &self.alpha
    }

    /// The common total `N = |r| = |s|`.
    pub fn size(&self) -> u32 {
        self.size
    }

    fn check(&self, r: &MultiIndex) -> Result<()> {
        if r.dim() != self.alpha.dim() {
            return Err(Error::DimensionMismatch { expected: self.alpha.dim(), got: r.dim() });
        }
        if r.total() != self.size {
            return Err(invalid("r", format!("|r| = {} but N = {}", r.total(), self.size)));
        }
        Ok(())
    }
}

fn poch_label(what: &str, a: &impl Field, len: u32) -> String {
    format!("{what} = ({})_({len})", a.to_f64())
}

/// `xi^H_0..=mmax` for a bare parameter slice (possibly negative).
///
/// Uses `xi^H_m = m! (theta)_(m) / ((theta+N)_(m))^2 [t^m] prod_i sum_l w_i(l) t^l / l!`
/// with `w_i(l) = (a_i+r_i)_(l) (a_i+s_i)_(l) / (a_i)_(l)`. Terms whose
/// `(a_i)_(l)` vanishes lie outside the support and are dropped.
fn xi_h_raw<F: Field>(alpha: &[F], total: &F, r: &[u32], s: &[u32], mmax: u32) -> Result<Vec<F>> {
    let size: u32 = r.iter().sum();
    let len = mmax as usize + 1;
    let series: Vec<Vec<F>> = alpha
        .iter()
        .zip(r.iter().zip(s))
        .map(|(a, (&ri, &si))| {
            let ar = a.clone() + F::from_i64(ri as i64);
            let as_ = a.clone() + F::from_i64(si as i64);
            let mut ser = vec![F::one()];
            let mut c = F::one();
            for l in 0..mmax {
                let lf = F::from_i64(l as i64);
                let den = (a.clone() + &lf) * F::from_i64(l as i64 + 1);
                if den.is_zero() {
                    break;
                }
                c = c * (ar.clone() + &lf) * (as_.clone() + &lf) / den;
                ser.push(c.clone());
            }
            ser
        })
        .collect();
    let prod = truncated_product(&series, len);
    let shifted = total.clone() + F::from_i64(size as i64);
    let mut out = Vec::with_capacity(len);
    for (m, p) in prod.into_iter().enumerate() {
        let m = m as u32;
        let den = rising(&shifted, m);
        if den.is_zero() {
            return Err(Error::VanishingPochhammer { factor: poch_label("(|alpha|+N)_(m)", &shifted, m) });
        }
        out.push(p * factorial_f::<F>(m) * rising(total, m) / (den.clone() * den));
    }
    Ok(out)
}

/// `chi^H_0..=mmax`, `chi^H_m = m! (theta)_(m) / N_[m]^2 [t^m] prod_i sum_l
/// (r_i)_[l] (s_i)_[l] / ((a_i)_(l) l!) t^l`.
fn chi_h_raw<F: Field>(alpha: &[F], total: &F, r: &[u32], s: &[u32], mmax: u32) -> Result<Vec<F>> {
    let size: u32 = r.iter().sum();
    if mmax > size {
        return Err(Error::DegreeOutOfRange { n: mmax, bound: size });
    }
    let len = mmax as usize + 1;
    let series: Vec<Vec<F>> = alpha
        .iter()
        .zip(r.iter().zip(s))
        .map(|(a, (&ri, &si))| {
            let mut ser = vec![F::one()];
            let mut c = F::one();
            for l in 0..mmax.min(ri.min(si)) {
                let lf = F::from_i64(l as i64);
                let den = (a.clone() + &lf) * F::from_i64(l as i64 + 1);
                if den.is_zero() {
                    break;
                }
                c = c * F::from_i64((ri - l) as i64) * F::from_i64((si - l) as i64) / den;
                ser.push(c.clone());
            }
            ser
        })
        .collect();
    let prod = truncated_product(&series, len);
    let big = F::from_i64(size as i64);
    Ok(prod
        .into_iter()
        .enumerate()
        .map(|(m, p)| {
            let m = m as u32;
            let nf = falling(&big, m);
            p * factorial_f::<F>(m) * rising(total, m) / (nf.clone() * nf)
        })
        .collect())
}

fn h_from_xi<F: Field>(total: &F, size: u32, n: u32, xis: &[F]) -> F {
    let big = F::from_i64(size as i64);
    let pre = rising(&(total.clone() + &big), n) / falling(&big, n);
    let s = (0..=n).fold(F::zero(), |s, m| s + coeff_a_unchecked(total, n, m) * &xis[m as usize]);
    pre * s
}

fn degree_check(n: u32, size: u32) -> Result<()> {
    if n > size {
        return Err(Error::DegreeOutOfRange { n, bound: size });
    }
    Ok(())
}

/// `xi^H_m(r, s)`, nonnegative for positive `alpha`.
pub fn xi_h<F: Field>(ctx: &HahnContext<F>, m: u32, r: &MultiIndex, s: &MultiIndex) -> Result<F> {
    Ok(xi_h_all(ctx, m, r, s)?.pop().expect("nonempty"))
}

pub fn xi_h_all<F: Field>(ctx: &HahnContext<F>, mmax: u32, r: &MultiIndex, s: &MultiIndex) -> Result<Vec<F>> {
    ctx.check(r)?;
    ctx.check(s)?;
    xi_h_raw(ctx.alpha.alpha(), ctx.alpha.total(), r.parts(), s.parts(), mmax)
}

/// `H_n(r, s)` for `0 <= n <= N`.
pub fn h_kernel<F: Field>(ctx: &HahnContext<F>, n: u32, r: &MultiIndex, s: &MultiIndex) -> Result<F> {
    degree_check(n, ctx.size)?;
    let xis = xi_h_all(ctx, n, r, s)?;
    Ok(h_from_xi(ctx.alpha.total(), ctx.size, n, &xis))
}

/// `H_0..=nmax` sharing one set of `xi^H` values.
pub fn h_kernels<F: Field>(ctx: &HahnContext<F>, nmax: u32, r: &MultiIndex, s: &MultiIndex) -> Result<Vec<F>> {
    degree_check(nmax, ctx.size)?;
    let xis = xi_h_all(ctx, nmax, r, s)?;
    Ok((0..=nmax).map(|n| h_from_xi(ctx.alpha.total(), ctx.size, n, &xis)).collect())
}

/// `chi^H_m(r, s)`, the falling-factorial analogue of `xi^H_m`.
pub fn chi_h<F: Field>(ctx: &HahnContext<F>, m: u32, r: &MultiIndex, s: &MultiIndex) -> Result<F> {
    ctx.check(r)?;
    ctx.check(s)?;
    Ok(chi_h_raw(ctx.alpha.alpha(), ctx.alpha.total(), r.parts(), s.parts(), m)?
        .pop()
        .expect("nonempty"))
}

/// `H_n` through the product-formula form
/// `N_[n] / (|alpha|+N)_(n) * sum_m a_{nm} chi^H_m`.
pub fn h_kernel_chi<F: Field>(ctx: &HahnContext<F>, n: u32, r: &MultiIndex, s: &MultiIndex) -> Result<F> {
    degree_check(n, ctx.size)?;
    ctx.check(r)?;
    ctx.check(s)?;
    let total = ctx.alpha.total();
    let chis = chi_h_raw(ctx.alpha.alpha(), total, r.parts(), s.parts(), n)?;
    let big = F::from_i64(ctx.size as i64);
    let pre = falling(&big, n) / rising(&(total.clone() + &big), n);
    let sum = (0..=n).fold(F::zero(), |acc, m| acc + coeff_a_unchecked(total, n, m) * &chis[m as usize]);
    Ok(pre * sum)
}

/// `u_{N,n} h_n(s_j) h_n(N)` with the marginal parameters
/// `(alpha_j, |alpha| - alpha_j)`; equals `H_n(s, N e_j)`.
pub fn project_hahn<F: Field>(ctx: &HahnContext<F>, n: u32, s: &MultiIndex, j: usize) -> Result<F> {
    ctx.check(s)?;
    if j >= ctx.alpha.dim() {
        return Err(invalid("j", format!("coordinate {j} out of range")));
    }
    let (a, b) = ctx.alpha.marginal(j);
    let size = ctx.size;
    Ok(u_norm(&a, &b, size, n)?
        * univariate_hahn(&a, &b, n, s.parts()[j], size)?
        * univariate_hahn(&a, &b, n, size, size)?)
}

/// Kernel of degree `n` for the multivariate hypergeometric law with urn
/// composition `c`, obtained by putting `alpha = -c`. Valid for
/// `n <= min(N, |c| - N)`; beyond that a Pochhammer denominator vanishes.
pub fn hypergeom_kernel<F: Field>(c: &MultiIndex, n: u32, r: &MultiIndex, s: &MultiIndex) -> Result<F> {
    for v in [r, s] {
        if v.dim() != c.dim() {
            return Err(Error::DimensionMismatch { expected: c.dim(), got: v.dim() });
        }
        if let Some(i) = (0..c.dim()).find(|&i| v.parts()[i] > c.parts()[i]) {
            return Err(invalid("r", format!("coordinate {i} exceeds the urn count {}", c.parts()[i])));
        }
    }
    if r.total() != s.total() {
        return Err(invalid("s", "r and s must have the same total"));
    }
    let size = r.total();
    degree_check(n, size)?;
    let room = c.total() - size;
    if n > room {
        return Err(Error::VanishingPochhammer {
            factor: format!("(N - |c|)_(n) = ({}-{})_({n}) in the xi^H denominator", size, c.total()),
        });
    }
    let alpha: Vec<F> = c.parts().iter().map(|&v| F::from_i64(-(v as i64))).collect();
    let total = F::from_i64(-(c.total() as i64));
    let xis = xi_h_raw(&alpha, &total, r.parts(), s.parts(), n)?;
    Ok(h_from_xi(&total, size, n, &xis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{dm_pmf, hypergeom_pmf};
    use crate::jacobi::{q_kernel_poly, xi_poly};
    use crate::numkit::{compositions, q, Poly, Rational};

    fn params(v: &[(i64, i64)]) -> DirichletParams<Rational> {
        DirichletParams::new(v.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        v.to_vec().into()
    }

    fn support(d: usize, size: u32) -> Vec<MultiIndex> {
        compositions(d, size).collect()
    }

    /// `E[p(X, Y)]` under `D(alpha+r) x D(alpha+s)`.
    fn posterior_mean(p: &Poly<Rational>, alpha: &DirichletParams<Rational>, r: &MultiIndex, s: &MultiIndex) -> Rational {
        let (ar, as_) = (alpha.shifted(r), alpha.shifted(s));
        p.expect_dirichlet(&[ar.alpha(), as_.alpha()])
    }

    #[test]
    fn xi_examples() {
        let ctx = HahnContext::new(params(&[(1, 1), (1, 1)]), 1);
        let r = mi(&[1, 0]);
        assert_eq!(xi_h(&ctx, 0, &r, &r).unwrap(), q(1, 1));
        assert_eq!(xi_h(&ctx, 1, &r, &r).unwrap(), q(10, 9));
    }

    #[test]
    fn xi_is_posterior_mean_of_jacobi_xi() {
        for (alpha, size) in [(params(&[(1, 2), (3, 2)]), 3), (params(&[(1, 1), (2, 3), (3, 2)]), 2)] {
            let ctx = HahnContext::new(alpha.clone(), size);
            let pts = support(alpha.dim(), size);
            for m in 0..=3 {
                let p = xi_poly(&alpha, m);
                for r in &pts {
                    for s in &pts {
                        assert_eq!(xi_h(&ctx, m, r, s).unwrap(), posterior_mean(&p, &alpha, r, s));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_is_posterior_mean_of_jacobi_kernel() {
        for (alpha, size) in [(params(&[(1, 2), (3, 2)]), 4), (params(&[(1, 1), (2, 3), (3, 2)]), 3)] {
            let ctx = HahnContext::new(alpha.clone(), size);
            let pts = support(alpha.dim(), size);
            let big = q(size as i64, 1);
            for n in 0..=size {
                let p = q_kernel_poly(&alpha, n).unwrap();
                let pre = rising(&(alpha.total().clone() + &big), n) / falling(&big, n);
                for r in &pts {
                    for s in &pts {
                        let want = pre.clone() * posterior_mean(&p, &alpha, r, s);
                        assert_eq!(h_kernel(&ctx, n, r, s).unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn first_kernel_display() {
        // (|a|+1)(|a|+N)/N * (|a|/(|a|+N)^2 sum (a_i+r_i)(a_i+s_i)/a_i - 1)
        let alpha = params(&[(1, 1), (1, 1)]);
        let ctx = HahnContext::new(alpha.clone(), 2);
        let t = alpha.total().clone();
        for r in support(2, 2) {
            for s in support(2, 2) {
                let sum = (0..2).fold(q(0, 1), |acc, i| {
                    let a = &alpha.alpha()[i];
                    acc + (a.clone() + q(r.parts()[i] as i64, 1)) * (a.clone() + q(s.parts()[i] as i64, 1)) / a
                });
                let n = q(2, 1);
                let tn = t.clone() + &n;
                let want = (t.clone() + q(1, 1)) * tn.clone() / n * (t.clone() / (tn.clone() * tn) * sum - q(1, 1));
                assert_eq!(h_kernel(&ctx, 1, &r, &s).unwrap(), want);
            }
        }
    }

    #[test]
    fn orthogonality_and_completeness() {
        let cases = [
            (params(&[(1, 1), (1, 1)]), 5u32),
            (params(&[(1, 2), (7, 3)]), 4),
            (params(&[(1, 1), (1, 2), (2, 1)]), 4),
        ];
        for (alpha, size) in cases {
            let ctx = HahnContext::new(alpha.clone(), size);
            let pts = support(alpha.dim(), size);
            let w: Vec<Rational> = pts.iter().map(|s| dm_pmf(&alpha, s)).collect();
            let table: Vec<Vec<Vec<Rational>>> = pts
                .iter()
                .map(|r| pts.iter().map(|s| h_kernels(&ctx, size, r, s).unwrap()).collect())
                .collect();
            for (ri, r) in pts.iter().enumerate() {
                for ti in 0..pts.len() {
                    for n in 0..=size as usize {
                        for m in 0..=size as usize {
                            let e = (0..pts.len()).fold(q(0, 1), |acc, si| {
                                acc + w[si].clone() * &table[ri][si][n] * &table[ti][si][m]
                            });
                            let want = if n == m { table[ri][ti][n].clone() } else { q(0, 1) };
                            assert_eq!(e, want);
                        }
                    }
                    if size <= 4 {
                        let full = table[ri][ti].iter().fold(q(0, 1), |a, v| a + v);
                        let want = if ri == ti { dm_pmf(&alpha, r).recip() } else { q(0, 1) };
                        assert_eq!(full, want);
                    }
                }
            }
        }
    }

    #[test]
    fn product_formula_extension() {
        for (alpha, size) in [(params(&[(1, 2), (5, 3)]), 5u32), (params(&[(1, 1), (2, 3), (3, 2)]), 4)] {
            let ctx = HahnContext::new(alpha.clone(), size);
            let pts = support(alpha.dim(), size);
            for n in 0..=size {
                for r in &pts {
                    for s in &pts {
                        assert_eq!(h_kernel(&ctx, n, r, s).unwrap(), h_kernel_chi(&ctx, n, r, s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn chi_binomial_form_for_d2() {
        let alpha = params(&[(2, 3), (3, 2)]);
        let size = 5u32;
        let ctx = HahnContext::new(alpha.clone(), size);
        let big = q(size as i64, 1);
        for m in 0..=size {
            for r in 0..=size {
                for s in 0..=size {
                    let want = (0..=m).fold(q(0, 1), |acc, j| {
                        let c = Rational::from_bigint(&crate::numkit::binomial(m, j));
                        let fr = c.clone() * falling(&q(r as i64, 1), j) * falling(&q((size - r) as i64, 1), m - j) / falling(&big, m);
                        let fs = c * falling(&q(s as i64, 1), j) * falling(&q((size - s) as i64, 1), m - j) / falling(&big, m);
                        acc + fr * fs / dm_pmf(&alpha, &mi(&[j, m - j]))
                    });
                    let got = chi_h(&ctx, m, &mi(&[r, size - r]), &mi(&[s, size - s])).unwrap();
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn d2_kernel_is_gasper_product() {
        let (a, b) = (q(1, 2), q(5, 3));
        let alpha = DirichletParams::new(vec![a.clone(), b.clone()]).unwrap();
        for size in 0..=5u32 {
            let ctx = HahnContext::new(alpha.clone(), size);
            for n in 0..=size {
                let u = u_norm(&a, &b, size, n).unwrap();
                for r in 0..=size {
                    for s in 0..=size {
                        let k = h_kernel(&ctx, n, &mi(&[r, size - r]), &mi(&[s, size - s])).unwrap();
                        assert_eq!(k, u.clone() * gasper_product(&a, &b, n, r, s, size).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn xi_in_chi_basis() {
        for alpha in [params(&[(1, 2), (5, 3)]), params(&[(1, 1), (2, 3), (3, 2)])] {
            let size = 4u32;
            let ctx = HahnContext::new(alpha.clone(), size);
            let t = alpha.total().clone();
            let pts = support(alpha.dim(), size);
            for m in 0..=size {
                for r in &pts {
                    for s in &pts {
                        let rhs = (0..=m).fold(q(0, 1), |acc, l| {
                            acc + connection_b(&t, size, m, l).unwrap() * chi_h(&ctx, l, r, s).unwrap()
                        });
                        assert_eq!(xi_h(&ctx, m, r, s).unwrap(), rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn xi_chi_cross_moments() {
        for alpha in [params(&[(1, 2), (5, 3)]), params(&[(1, 1), (2, 3), (3, 2)])] {
            let size = 3u32;
            let ctx = HahnContext::new(alpha.clone(), size);
            let pts = support(alpha.dim(), size);
            let w: Vec<Rational> = pts.iter().map(|s| dm_pmf(&alpha, s)).collect();
            for m in 0..=size {
                for l in 0..=size {
                    let mut e = q(0, 1);
                    for (ri, r) in pts.iter().enumerate() {
                        for (si, s) in pts.iter().enumerate() {
                            e = e + w[ri].clone() * &w[si] * xi_h(&ctx, m, r, s).unwrap() * chi_h(&ctx, l, r, s).unwrap();
                        }
                    }
                    assert_eq!(e, cross_moment(alpha.total(), alpha.dim(), m, l).unwrap(), "m={m} l={l}");
                }
            }
        }
    }

    #[test]
    fn coordinate_projection() {
        let alpha = params(&[(1, 1), (1, 1), (1, 1)]);
        let ctx = HahnContext::new(alpha.clone(), 3);
        for n in 0..=3 {
            for s in support(3, 3) {
                for j in 0..3 {
                    let corner = MultiIndex::unit(3, j, 3);
                    assert_eq!(h_kernel(&ctx, n, &s, &corner).unwrap(), project_hahn(&ctx, n, &s, j).unwrap());
                }
            }
        }
        // xi^H_m(s, N e_1) reduces to the two-dimensional xi^H at (s_1, N)
        let alpha = params(&[(1, 2), (2, 3), (3, 1)]);
        let ctx = HahnContext::new(alpha.clone(), 4);
        let (a, b) = alpha.marginal(0);
        let ctx2 = HahnContext::new(DirichletParams::new(vec![a, b]).unwrap(), 4);
        for m in 0..=4 {
            for s in support(3, 4) {
                let lhs = xi_h(&ctx, m, &s, &MultiIndex::unit(3, 0, 4)).unwrap();
                let s2 = mi(&[s.parts()[0], 4 - s.parts()[0]]);
                assert_eq!(lhs, xi_h(&ctx2, m, &s2, &mi(&[4, 0])).unwrap());
            }
        }
    }

    #[test]
    fn hypergeometric_kernels() {
        for (c, size) in [(mi(&[2, 2]), 2u32), (mi(&[3, 2]), 2), (mi(&[2, 1, 2]), 2), (mi(&[2, 2, 2]), 3)] {
            let pts: Vec<MultiIndex> = support(c.dim(), size)
                .into_iter()
                .filter(|r| r.parts().iter().zip(c.parts()).all(|(a, b)| a <= b))
                .collect();
            let w: Vec<Rational> = pts.iter().map(|r| hypergeom_pmf(&c, r).unwrap()).collect();
            let nmax = size.min(c.total() - size);
            for n in 0..=nmax {
                for m in 0..=nmax {
                    for r in &pts {
                        for t in &pts {
                            let e = pts.iter().zip(&w).fold(q(0, 1), |acc, (s, ws)| {
                                acc + ws.clone()
                                    * hypergeom_kernel::<Rational>(&c, n, r, s).unwrap()
                                    * hypergeom_kernel::<Rational>(&c, m, t, s).unwrap()
                            });
                            let want = if n == m { hypergeom_kernel(&c, n, r, t).unwrap() } else { q(0, 1) };
                            assert_eq!(e, want);
                        }
                    }
                }
            }
            // squared norm of each degree is its dimension, hence positive
            for n in 1..=nmax {
                let norm = pts.iter().zip(&w).fold(q(0, 1), |acc, (r, wr)| {
                    acc + wr.clone() * hypergeom_kernel::<Rational>(&c, n, r, r).unwrap()
                });
                assert!(norm > q(0, 1));
            }
        }
        let c = mi(&[2, 1]);
        let r = mi(&[1, 1]);
        assert!(matches!(
            hypergeom_kernel::<Rational>(&c, 2, &r, &r),
            Err(Error::VanishingPochhammer { .. })
        ));
        assert!(hypergeom_kernel::<Rational>(&c, 0, &mi(&[0, 2]), &r).is_err());
    }

    #[test]
    fn degree_and_shape_errors() {
        let ctx = HahnContext::new(params(&[(1, 1), (1, 1)]), 2);
        let r = mi(&[1, 1]);
        assert!(matches!(h_kernel(&ctx, 3, &r, &r), Err(Error::DegreeOutOfRange { n: 3, bound: 2 })));
        assert!(h_kernel(&ctx, 1, &mi(&[1, 0]), &r).is_err());
        assert!(h_kernel(&ctx, 1, &mi(&[1, 0, 1]), &r).is_err());
        assert_eq!(h_kernel(&ctx, 0, &r, &mi(&[2, 0])).unwrap(), q(1, 1));
    }
}
