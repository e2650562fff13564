//! Kernels for ranked (symmetrized) Dirichlet laws, the Poisson-Dirichlet
//! limit, and their discrete counterparts on random partitions.
//!
//! Everything is written over partitions `l` of `m` in multiplicity form.
//! With `#(l) = C(m; l) / prod beta_j!` and `[x; l]` the sum over ordered
//! tuples of distinct coordinates,
//!
//! ```text
//! xi_m(x, y) = sum_l #(l)^2 [x; l] [y; l] / DM_down(l; m),
//! ```
//!
//! and the `d = infinity` version replaces the ranked DM by the Ewens
//! sampling formula.
//!
//! Truncated infinite points carry a tail mass, which is treated as dust:
//! infinitely many infinitesimal atoms. Dust fills singleton parts only,
//! so power sums of order two or more never see it.

mod ranked_hahn;

pub use ranked_hahn::{h_kernel_esf, h_kernel_ranked, xi_h_esf, xi_h_ranked};

use std::collections::HashMap;

use crate::dist::{esf_pmf, ranked_dm_pmf, RankedPoint, PD_TAIL_BUDGET, SIMPLEX_TOL};
use crate::error::{invalid, Error, Result};
use crate::jacobi::CoeffTriangle;
use crate::numkit::{binomial, factorial_f, multinomial_f, partitions, Field, MultiIndex, PartitionProfile, Poly};

/// `sum` over placements of the parts of `blocks` on distinct coordinates
/// `0..d` (equal parts unordered) of `prod w(i, part)`.
pub(crate) fn orbit_sum<F: Field>(d: usize, blocks: &[(u32, u32)], w: impl Fn(usize, u32) -> F) -> F {
    let start: Vec<u32> = blocks.iter().map(|b| b.1).collect();
    let mut states: HashMap<Vec<u32>, F> = HashMap::new();
    states.insert(start, F::one());
    for i in 0..d {
        let mut next: HashMap<Vec<u32>, F> = HashMap::with_capacity(states.len() * 2);
        let weights: Vec<F> = blocks.iter().map(|b| w(i, b.0)).collect();
        for (state, val) in states {
            for (b, wb) in weights.iter().enumerate() {
                if state[b] == 0 || wb.is_zero() {
                    continue;
                }
                let mut s = state.clone();
                s[b] -= 1;
                let e = next.entry(s).or_insert_with(F::zero);
                *e = e.clone() + val.clone() * wb;
            }
            let e = next.entry(state).or_insert_with(F::zero);
            *e = e.clone() + val;
        }
        states = next;
    }
    states.remove(&vec![0; blocks.len()]).unwrap_or_else(F::zero)
}

/// `#(l) = C(|l|; l) / prod beta_j!`.
pub fn sharp<F: Field>(part: &PartitionProfile) -> F {
    multinomial_f::<F>(&MultiIndex::new(part.parts().to_vec())) / F::from_bigint(&part.beta_factorial())
}

/// `[x; l]` over the listed atoms only.
fn bracket_atoms<F: Field>(x: &[F], part: &PartitionProfile) -> F {
    let blocks = part.blocks();
    F::from_bigint(&part.beta_factorial()) * orbit_sum(x.len(), &blocks, |i, j| x[i].powi(j))
}

/// `[x; l]`: the sum over ordered tuples of distinct coordinates of
/// `prod x_{i_j}^{l_j}`. Tail mass enters through singleton parts.
pub fn power_sum_functional<F: Field>(x: &RankedPoint<F>, part: &PartitionProfile) -> F {
    let ones = part.multiplicity(1);
    if ones == 0 || x.tail().is_zero() {
        return bracket_atoms(x.weights(), part);
    }
    let mut total = F::zero();
    for s in 0..=ones {
        let mut parts: Vec<u32> = part.parts().to_vec();
        for _ in 0..s {
            parts.pop();
        }
        let rest = PartitionProfile::from_parts(parts);
        total = total + F::from_bigint(&binomial(ones, s)) * x.tail().powi(s) * bracket_atoms(x.weights(), &rest);
    }
    total
}

fn check_finite<F: Field>(d: usize, x: &RankedPoint<F>) -> Result<()> {
    if x.len() > d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    let leak = match x.tail().flavor() {
        crate::numkit::Flavor::Exact => !x.tail().is_zero(),
        crate::numkit::Flavor::Float => x.tail().to_f64() > SIMPLEX_TOL,
    };
    if leak {
        return Err(invalid("x", "finite-dimensional ranked points must sum to 1"));
    }
    Ok(())
}

fn check_theta<F: Field>(theta: &F) -> Result<()> {
    if *theta <= F::zero() {
        return Err(invalid("theta", "must be positive"));
    }
    Ok(())
}

/// Ranked Jacobi `xi_m` for `D(theta/d, ..., theta/d)`.
pub fn xi_ranked<F: Field>(theta: &F, d: usize, m: u32, x: &RankedPoint<F>, y: &RankedPoint<F>) -> Result<F> {
    check_theta(theta)?;
    check_finite(d, x)?;
    check_finite(d, y)?;
    let mut s = F::zero();
    for part in partitions(m, d) {
        let sh = sharp::<F>(&part);
        let num = sh.clone() * sh * power_sum_functional(x, &part) * power_sum_functional(y, &part);
        if num.is_zero() {
            continue;
        }
        s = s + num / ranked_dm_pmf(theta, d, &part, m)?;
    }
    Ok(s)
}

/// The ranked Jacobi kernel `sum_{m<=n} a_{nm} xi_m`; degree one vanishes.
pub fn q_kernel_ranked<F: Field>(theta: &F, d: usize, n: u32, x: &RankedPoint<F>, y: &RankedPoint<F>) -> Result<F> {
    let a = CoeffTriangle::a(theta, n)?;
    let mut s = F::zero();
    for m in 0..=n {
        s = s + a.get(n, m) * xi_ranked(theta, d, m, x, y)?;
    }
    Ok(s)
}

fn check_tail<F: Field>(x: &RankedPoint<F>) -> Result<()> {
    let t = x.tail().to_f64();
    if t > PD_TAIL_BUDGET {
        return Err(Error::TailBudget { tail: t, budget: PD_TAIL_BUDGET });
    }
    Ok(())
}

/// Poisson-Dirichlet `xi_m`: the ranked form with ESF in the denominator.
pub fn xi_pd<F: Field>(theta: &F, m: u32, x: &RankedPoint<F>, y: &RankedPoint<F>) -> Result<F> {
    check_theta(theta)?;
    check_tail(x)?;
    check_tail(y)?;
    let mut s = F::zero();
    for part in partitions(m, m as usize) {
        let sh = sharp::<F>(&part);
        let num = sh.clone() * sh * power_sum_functional(x, &part) * power_sum_functional(y, &part);
        if num.is_zero() {
            continue;
        }
        s = s + num / esf_pmf(theta, &part);
    }
    Ok(s)
}

/// Kernel of degree `n` for the Poisson-Dirichlet law.
pub fn q_kernel_pd<F: Field>(theta: &F, n: u32, x: &RankedPoint<F>, y: &RankedPoint<F>) -> Result<F> {
    let a = CoeffTriangle::a(theta, n)?;
    let mut s = F::zero();
    for m in 0..=n {
        s = s + a.get(n, m) * xi_pd(theta, m, x, y)?;
    }
    Ok(s)
}

/// `(F_1 - mu)(F_2 - mu) / sigma^2` with `F = sum w_i^2`,
/// `mu = 1/(1+theta)` and `sigma^2 = 2 theta / ((theta+3)(theta+2)(theta+1)^2)`.
pub fn q2_pd_closed_form<F: Field>(theta: &F, x: &RankedPoint<F>, y: &RankedPoint<F>) -> F {
    let one = F::one();
    let mu = (theta.clone() + &one).recip();
    let t1 = theta.clone() + &one;
    let sigma2 = F::from_i64(2) * theta
        / ((theta.clone() + F::from_i64(3)) * (theta.clone() + F::from_i64(2)) * t1.clone() * t1);
    (x.homozygosity() - &mu) * (y.homozygosity() - &mu) / sigma2
}

/// `(1/d!) sum_sigma p(sigma x)` for a polynomial in `d` variables.
pub fn symmetrize_polynomial<F: Field>(p: &Poly<F>) -> Poly<F> {
    let d = p.nvars();
    let perms = permutations(d);
    let scale = factorial_f::<F>(d as u32).recip();
    let mut out = Poly::zero(d);
    for perm in &perms {
        for (e, c) in p.terms() {
            let mut ne = vec![0; d];
            for (i, &k) in e.iter().enumerate() {
                ne[perm[i]] += k;
            }
            out.add_term(ne, c.clone() * &scale);
        }
    }
    out
}

/// Every permutation of `0..d` in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..d).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..d).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}
