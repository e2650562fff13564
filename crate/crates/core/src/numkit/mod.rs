//! Scalar arithmetic, factorial symbols, enumerations, terminating
//! hypergeometric series and Dirichlet moment primitives.

pub mod combinat;
pub mod hyper;
pub mod mc;
pub mod poly;
pub mod quad;
pub mod scalar;
pub mod stats;

pub use combinat::{
    binomial, compositions, factorial, falling, multinomial, partitions, rising, MultiIndex,
    PartitionProfile,
};
pub use hyper::{hyp2f1, hyp3f2, hyp_terminating};
pub use poly::Poly;
pub use scalar::{format_rational, parse_rational, q, Field, Flavor, Rational, Scalar};

use crate::dist::DirichletParams;

/// `E[prod X_i^{k_i}]` under `Dirichlet(alpha)`:
/// `prod (alpha_i)_(k_i) / (|alpha|)_(|k|)`.
pub fn dirichlet_moment<F: Field>(alpha: &DirichletParams<F>, k: &MultiIndex) -> F {
    assert_eq!(alpha.dim(), k.dim(), "moment index length must match alpha");
    dirichlet_moment_raw(alpha.alpha(), alpha.total(), k.parts())
}

/// Same as [`dirichlet_moment`] for a bare parameter slice. Parameters may
/// be negative (hypergeometric kernels use `alpha = -c`).
pub fn dirichlet_moment_raw<F: Field>(alpha: &[F], total: &F, k: &[u32]) -> F {
    let mut num = F::one();
    let mut n = 0;
    for (a, &ki) in alpha.iter().zip(k) {
        if ki > 0 {
            num = num * rising(a, ki);
            n += ki;
        }
    }
    num / rising(total, n)
}

/// Multinomial coefficient as a field element.
pub fn multinomial_f<F: Field>(m: &MultiIndex) -> F {
    F::from_bigint(&multinomial(m))
}

/// Coefficients of `prod_i series_i(t)` through `t^(len-1)`.
pub fn truncated_product<F: Field>(series: &[Vec<F>], len: usize) -> Vec<F> {
    let mut prod = vec![F::zero(); len];
    if len == 0 {
        return prod;
    }
    prod[0] = F::one();
    for ser in series {
        let mut next = vec![F::zero(); len];
        for (a, pa) in prod.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (b, sb) in ser.iter().enumerate().take(len - a) {
                if !sb.is_zero() {
                    next[a + b] = next[a + b].clone() + pa.clone() * sb;
                }
            }
        }
        prod = next;
    }
    prod
}

/// `n!` as a field element.
pub fn factorial_f<F: Field>(n: u32) -> F {
    F::from_bigint(&factorial(n))
}
