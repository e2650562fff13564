//! Hahn kernels on ranked counts: the ranked Dirichlet-Multinomial with
//! parameter `theta/d`, and its `d -> infinity` limit, the Ewens sampling
//! formula.
//!
//! `xi^H_m` is the ranked `xi_m` averaged over the posteriors of `r` and
//! `s`. The posterior mean of `[X; l]` is `prod beta_j! S_l(r) / (theta+N)_(m)`
//! where `S_l(r)` is an orbit sum of `(theta/d + r_i)_(j)`.

use super::{orbit_sum, sharp};
use crate::dist::{esf_pmf, ranked_dm_pmf};
use crate::error::{invalid, Error, Result};
use crate::jacobi::CoeffTriangle;
use crate::numkit::{factorial_f, falling, partitions, rising, Field, PartitionProfile};

fn check_counts(d: Option<usize>, size: u32, r: &PartitionProfile) -> Result<()> {
    if r.total() != size {
        return Err(invalid("r", format!("|r| = {} but N = {size}", r.total())));
    }
    if let Some(d) = d {
        if r.k() > d {
            return Err(Error::DimensionMismatch { expected: d, got: r.k() });
        }
    }
    Ok(())
}

fn check_theta<F: Field>(theta: &F) -> Result<()> {
    if *theta <= F::zero() {
        return Err(invalid("theta", "must be positive"));
    }
    Ok(())
}

/// Posterior mean of `[X; l]` given ranked counts `r` in dimension `d`.
fn posterior_bracket<F: Field>(theta: &F, d: usize, r: &PartitionProfile, part: &PartitionProfile) -> F {
    let each = theta.clone() / F::from_i64(d as i64);
    let counts = r.parts();
    let s = orbit_sum(d, &part.blocks(), |i, j| {
        let ri = counts.get(i).copied().unwrap_or(0);
        rising(&(each.clone() + F::from_i64(ri as i64)), j)
    });
    let size = F::from_i64(r.total() as i64);
    F::from_bigint(&part.beta_factorial()) * s / rising(&(theta.clone() + size), part.total())
}

/// Sub-multiplicity vectors `b'' <= b` of the blocks of `part`.
fn splits(blocks: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &(_, b) in blocks {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// The `d -> infinity` limit of [`posterior_bracket`]: parts either land
/// on occupied coordinates, weighted by `(r_i)_(j)`, or on fresh ones,
/// which contribute `theta (j-1)!` each.
fn posterior_bracket_esf<F: Field>(theta: &F, r: &PartitionProfile, part: &PartitionProfile) -> F {
    let blocks = part.blocks();
    let counts = r.parts();
    let mut total = F::zero();
    for fresh in splits(&blocks) {
        let occ: Vec<(u32, u32)> = blocks
            .iter()
            .zip(&fresh)
            .filter(|((_, b), f)| b > f)
            .map(|(&(j, b), &f)| (j, b - f))
            .collect();
        let inner = orbit_sum(counts.len(), &occ, |i, j| rising(&F::from_i64(counts[i] as i64), j));
        if inner.is_zero() {
            continue;
        }
        let mut w = F::one();
        for (&(j, _), &f) in blocks.iter().zip(&fresh) {
            w = w * (theta.clone() * factorial_f::<F>(j - 1)).powi(f) / factorial_f::<F>(f);
        }
        total = total + inner * w;
    }
    let size = F::from_i64(r.total() as i64);
    F::from_bigint(&part.beta_factorial()) * total / rising(&(theta.clone() + size), part.total())
}

/// Ranked Hahn `xi^H_m` for the ranked `DM(theta/d, N)`.
pub fn xi_h_ranked<F: Field>(theta: &F, d: usize, m: u32, r: &PartitionProfile, s: &PartitionProfile) -> Result<F> {
    check_theta(theta)?;
    check_counts(Some(d), r.total(), r)?;
    check_counts(Some(d), r.total(), s)?;
    let mut out = F::zero();
    for part in partitions(m, d) {
        let sh = sharp::<F>(&part);
        let num = sh.clone() * sh * posterior_bracket(theta, d, r, &part) * posterior_bracket(theta, d, s, &part);
        out = out + num / ranked_dm_pmf(theta, d, &part, m)?;
    }
    Ok(out)
}

/// Ewens `xi^H_m`, the limit of [`xi_h_ranked`] as `d` grows.
pub fn xi_h_esf<F: Field>(theta: &F, m: u32, r: &PartitionProfile, s: &PartitionProfile) -> Result<F> {
    check_theta(theta)?;
    check_counts(None, r.total(), s)?;
    let mut out = F::zero();
    for part in partitions(m, m as usize) {
        let sh = sharp::<F>(&part);
        let num = sh.clone() * sh * posterior_bracket_esf(theta, r, &part) * posterior_bracket_esf(theta, s, &part);
        out = out + num / esf_pmf(theta, &part);
    }
    Ok(out)
}

fn assemble<F: Field>(theta: &F, size: u32, n: u32, xi: impl Fn(u32) -> Result<F>) -> Result<F> {
    if n > size {
        return Err(Error::DegreeOutOfRange { n, bound: size });
    }
    let a = CoeffTriangle::a(theta, n)?;
    let mut s = F::zero();
    for m in 0..=n {
        s = s + a.get(n, m) * xi(m)?;
    }
    let big = F::from_i64(size as i64);
    Ok(rising(&(theta.clone() + &big), n) / falling(&big, n) * s)
}

/// Hahn kernel of degree `n` for the ranked `DM(theta/d, N)`.
pub fn h_kernel_ranked<F: Field>(theta: &F, d: usize, size: u32, n: u32, r: &PartitionProfile, s: &PartitionProfile) -> Result<F> {
    check_counts(Some(d), size, r)?;
    assemble(theta, size, n, |m| xi_h_ranked(theta, d, m, r, s))
}

/// Hahn kernel of degree `n` for the Ewens sampling formula on partitions of `N`.
pub fn h_kernel_esf<F: Field>(theta: &F, size: u32, n: u32, r: &PartitionProfile, s: &PartitionProfile) -> Result<F> {
    check_counts(None, size, r)?;
    assemble(theta, size, n, |m| xi_h_esf(theta, m, r, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DirichletParams;
    use crate::hahn::{xi_h, HahnContext};
    use crate::numkit::{compositions, q, Rational};
    use crate::symkern::permutations;

    #[test]
    fn ranked_xi_is_permutation_average() {
        let theta = q(5, 2);
        let ctx = HahnContext::new(DirichletParams::symmetric(&theta, 3).unwrap(), 3);
        let all: Vec<_> = compositions(3, 3).collect();
        for r in &all {
            for s in &all {
                for m in 0..=3 {
                    let avg = permutations(3).iter().fold(q(0, 1), |acc, p| {
                        let rp = crate::numkit::MultiIndex::new(p.iter().map(|&i| r.parts()[i]).collect());
                        acc + xi_h(&ctx, m, &rp, s).unwrap()
                    }) / q(6, 1);
                    assert_eq!(xi_h_ranked(&theta, 3, m, &r.profile(), &s.profile()).unwrap(), avg);
                }
            }
        }
    }

    fn ortho_complete(theta: &Rational, size: u32, pmf: impl Fn(&PartitionProfile) -> Rational, h: impl Fn(u32, &PartitionProfile, &PartitionProfile) -> Rational, max_parts: usize) {
        let sup = partitions(size, max_parts);
        let kern: Vec<Vec<Vec<Rational>>> =
            (0..=size).map(|n| sup.iter().map(|r| sup.iter().map(|s| h(n, r, s)).collect()).collect()).collect();
        for n in 0..=size as usize {
            for m in 0..=size as usize {
                for (a, _) in sup.iter().enumerate() {
                    for (b, _) in sup.iter().enumerate() {
                        let e = sup.iter().enumerate().fold(q(0, 1), |acc, (c, rc)| acc + pmf(rc) * &kern[n][a][c] * &kern[m][c][b]);
                        let want = if n == m { kern[n][a][b].clone() } else { q(0, 1) };
                        assert_eq!(e, want, "n={n} m={m} theta={theta}");
                    }
                }
            }
        }
        for (a, r) in sup.iter().enumerate() {
            for (b, _) in sup.iter().enumerate() {
                let s = (0..=size as usize).fold(q(0, 1), |acc, n| acc + &kern[n][a][b]);
                let want = if a == b { pmf(r).recip() } else { q(0, 1) };
                assert_eq!(s, want);
            }
        }
        if size >= 1 {
            assert!(kern[1].iter().flatten().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn ranked_orthogonality_and_completeness() {
        for theta in [q(1, 1), q(7, 3)] {
            for size in 0..=4 {
                ortho_complete(
                    &theta,
                    size,
                    |r| ranked_dm_pmf(&theta, 3, r, size).unwrap(),
                    |n, r, s| h_kernel_ranked(&theta, 3, size, n, r, s).unwrap(),
                    3,
                );
            }
        }
    }

    #[test]
    fn esf_orthogonality_and_completeness() {
        for theta in [q(1, 1), q(1, 2), q(9, 4)] {
            for size in 0..=4 {
                ortho_complete(
                    &theta,
                    size,
                    |r| esf_pmf(&theta, r),
                    |n, r, s| h_kernel_esf(&theta, size, n, r, s).unwrap(),
                    size as usize,
                );
            }
        }
    }

    #[test]
    fn ranked_tends_to_esf() {
        let theta = 1.5;
        let r = PartitionProfile::from_parts(vec![3, 1, 1]);
        let s = PartitionProfile::from_parts(vec![2, 2, 1]);
        for n in 0..=3 {
            let fin = h_kernel_ranked(&theta, 400, 5, n, &r, &s).unwrap();
            let inf = h_kernel_esf(&theta, 5, n, &r, &s).unwrap();
            assert!((fin - inf).abs() <= 0.02 * inf.abs().max(1.0), "n={n}: {fin} vs {inf}");
        }
    }

    #[test]
    fn shape_errors() {
        let t = q(1, 1);
        let r = PartitionProfile::from_parts(vec![1, 1, 1, 1]);
        let s = PartitionProfile::from_parts(vec![4]);
        assert!(matches!(h_kernel_ranked(&t, 3, 4, 1, &r, &s), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(h_kernel_esf(&t, 4, 5, &s, &s), Err(Error::DegreeOutOfRange { .. })));
        assert!(h_kernel_esf(&t, 3, 1, &s, &s).is_err());
    }
}
