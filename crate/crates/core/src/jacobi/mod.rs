//! Multivariate Jacobi polynomial kernels over the Dirichlet distribution.
//!
//! The kernel of total degree `n` is a triangular combination of the
//! nonnegative mixture kernels
//!
//! ```text
//! xi_m(x, y) = sum_{|l|=m} C(m,l)^2 x^l y^l / DM_alpha(l; m),
//! Q_n(x, y)  = sum_{m<=n} a_{nm} xi_m(x, y),
//! ```
//!
//! with `a_{nm}` depending on `|alpha|` only. The [`basis`] submodule gives
//! the same kernel as a sum over a product-form orthogonal basis, which is
//! what floating evaluation at high degree uses.

pub mod basis;
mod triangle;
pub mod univariate;

pub use basis::{KernelTable, ProductBasis};
pub(crate) use triangle::coeff_a_unchecked;
pub use triangle::{coeff_a, coeff_c, CoeffTriangle};
pub use univariate::{orthonormal_f64, r_coefficients, r_values_f64, univariate_r, zeta, zeta_f64};

use crate::dist::{DirichletParams, SimplexPoint};
use crate::error::{invalid, Result};
use crate::numkit::{
    compositions, dirichlet_moment_raw, multinomial_f, rising, truncated_product, Field, Poly,
};

/// `xi_0(x,y), ..., xi_mmax(x,y)` for bare parameters.
///
/// Uses `xi_m = m! (|alpha|)_(m) [t^m] prod_i sum_k (x_i y_i t)^k / (k! (alpha_i)_(k))`,
/// which costs `O(d m^2)` instead of one term per composition.
pub(crate) fn xi_all_raw<F: Field>(alpha: &[F], total: &F, mmax: u32, x: &[F], y: &[F]) -> Vec<F> {
    let m = mmax as usize;
    let series: Vec<Vec<F>> = alpha
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let w = x[i].clone() * &y[i];
            let mut c = F::one();
            let mut ser = vec![c.clone()];
            for k in 0..m {
                c = if w.is_zero() {
                    F::zero()
                } else {
                    c * &w / (F::from_i64(k as i64 + 1) * (a.clone() + F::from_i64(k as i64)))
                };
                ser.push(c.clone());
            }
            ser
        })
        .collect();
    let prod = truncated_product(&series, m + 1);
    let mut out = Vec::with_capacity(m + 1);
    let mut scale = F::one();
    for (k, p) in prod.into_iter().enumerate() {
        if k > 0 {
            scale = scale * F::from_i64(k as i64) * (total.clone() + F::from_i64(k as i64 - 1));
        }
        out.push(p * &scale);
    }
    out
}

/// The defining composition sum for `xi_m`; kept as a test oracle.
pub fn xi_by_compositions<F: Field>(alpha: &DirichletParams<F>, m: u32, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> F {
    let mut s = F::zero();
    for l in compositions(alpha.dim(), m) {
        let c = multinomial_f::<F>(&l);
        let mut xy = F::one();
        for ((xi, yi), &li) in x.coords().iter().zip(y.coords()).zip(l.parts()) {
            xy = xy * (xi.clone() * yi).powi(li);
        }
        let dm = c.clone() * dirichlet_moment_raw(alpha.alpha(), alpha.total(), l.parts());
        s = s + c.clone() * c * xy / dm;
    }
    s
}

fn check_points<F: Field>(alpha: &DirichletParams<F>, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<()> {
    alpha.check_dim(x.dim())?;
    alpha.check_dim(y.dim())
}

/// `xi_m^alpha(x, y)`, nonnegative.
pub fn xi<F: Field>(alpha: &DirichletParams<F>, m: u32, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<F> {
    check_points(alpha, x, y)?;
    Ok(xi_all_raw(alpha.alpha(), alpha.total(), m, x.coords(), y.coords()).pop().expect("nonempty"))
}

/// `xi_0, ..., xi_mmax` at one pair of points.
pub fn xi_all<F: Field>(alpha: &DirichletParams<F>, mmax: u32, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<Vec<F>> {
    check_points(alpha, x, y)?;
    Ok(xi_all_raw(alpha.alpha(), alpha.total(), mmax, x.coords(), y.coords()))
}

/// `Q_n^alpha(x, y) = sum_{m<=n} a_{nm} xi_m(x, y)`.
pub fn q_kernel<F: Field>(alpha: &DirichletParams<F>, n: u32, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<F> {
    let xis = xi_all(alpha, n, x, y)?;
    let a = CoeffTriangle::a(alpha.total(), n)?;
    Ok(a.row_dot(n, &xis))
}

/// `Q_0, ..., Q_nmax` at one pair of points, sharing the xi values.
pub fn q_kernels<F: Field>(alpha: &DirichletParams<F>, nmax: u32, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<Vec<F>> {
    let xis = xi_all(alpha, nmax, x, y)?;
    let a = CoeffTriangle::a(alpha.total(), nmax)?;
    Ok((0..=nmax).map(|n| a.row_dot(n, &xis)).collect())
}

/// `xi_m(X, Y)` as a polynomial in the `2d` variables `(X, Y)`.
pub fn xi_poly<F: Field>(alpha: &DirichletParams<F>, m: u32) -> Poly<F> {
    let d = alpha.dim();
    let mut out = Poly::zero(2 * d);
    for l in compositions(d, m) {
        let c = multinomial_f::<F>(&l);
        let dm = c.clone() * dirichlet_moment_raw(alpha.alpha(), alpha.total(), l.parts());
        let mut e = l.parts().to_vec();
        e.extend_from_slice(l.parts());
        out.add_term(e, c.clone() * c / dm);
    }
    out
}

/// `Q_n(X, Y)` as a polynomial in the `2d` variables `(X, Y)`.
pub fn q_kernel_poly<F: Field>(alpha: &DirichletParams<F>, n: u32) -> Result<Poly<F>> {
    let a = CoeffTriangle::a(alpha.total(), n)?;
    let mut out = Poly::zero(2 * alpha.dim());
    for m in 0..=n {
        out = out.add(&xi_poly(alpha, m).scale(&a.get(n, m)));
    }
    Ok(out)
}

/// `zeta_n^{alpha_j, |alpha|-alpha_j} R_n^{alpha_j, |alpha|-alpha_j}(y_j)`, which
/// equals `Q_n(y, e_j)`.
pub fn project_to_coordinate<F: Field>(alpha: &DirichletParams<F>, n: u32, y: &SimplexPoint<F>, j: usize) -> Result<F> {
    alpha.check_dim(y.dim())?;
    if j >= alpha.dim() {
        return Err(invalid("j", format!("coordinate {j} out of range")));
    }
    if alpha.dim() < 2 {
        return Err(invalid("alpha", "coordinate kernels need d >= 2"));
    }
    let (a, b) = alpha.marginal(j);
    Ok(zeta(&a, &b, n) * univariate_r(&a, &b, n, &y.coords()[j])?)
}

/// Validates a grouping of `0..d` into nonempty disjoint blocks.
pub(crate) fn check_grouping(d: usize, grouping: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; d];
    for (b, block) in grouping.iter().enumerate() {
        if block.is_empty() {
            return Err(invalid("grouping", format!("block {b} is empty")));
        }
        for &i in block {
            if i >= d || seen[i] {
                return Err(invalid("grouping", format!("coordinate {i} is out of range or repeated")));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(invalid("grouping", "blocks do not cover every coordinate"));
    }
    Ok(())
}

/// Grouped parameters `A alpha`.
pub fn aggregate_params<F: Field>(alpha: &DirichletParams<F>, grouping: &[Vec<usize>]) -> Result<DirichletParams<F>> {
    check_grouping(alpha.dim(), grouping)?;
    DirichletParams::new(
        grouping
            .iter()
            .map(|b| b.iter().fold(F::zero(), |s, &i| s + &alpha.alpha()[i]))
            .collect(),
    )
}

/// The degree-`n` kernel of the aggregated vector `AX ~ D(A alpha)` at
/// points of the coarser simplex.
pub fn aggregate<F: Field>(
    alpha: &DirichletParams<F>,
    grouping: &[Vec<usize>],
    n: u32,
    x: &SimplexPoint<F>,
    y: &SimplexPoint<F>,
) -> Result<F> {
    let agg = aggregate_params(alpha, grouping)?;
    if agg.dim() == 1 {
        return Ok(if n == 0 { F::one() } else { F::zero() });
    }
    q_kernel(&agg, n, x, y)
}

/// `(|alpha|)_(m) / (alpha_j)_(m)`, the value of `xi_m(e_j, e_j)`.
pub fn xi_vertex<F: Field>(alpha: &DirichletParams<F>, m: u32, j: usize) -> F {
    rising(alpha.total(), m) / rising(&alpha.alpha()[j], m)
}

/// Number of orthogonal polynomials of total degree `n` in `d` variables
/// on the simplex, `C(n+d-2, d-2)`.
pub fn degree_dimension<F: Field>(d: usize, n: u32) -> F {
    if d < 2 {
        return if n == 0 { F::one() } else { F::zero() };
    }
    let k = (d - 2) as u32;
    F::from_bigint(&crate::numkit::binomial(n + k, k))
}
