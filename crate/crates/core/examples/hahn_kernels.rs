//! Dirichlet-multinomial kernels `H_n(r, s)`: the xi form, the
//! falling-factorial chi form and, for two colours, Gasper's product formula.

use simplex_kernels::dist::DirichletParams;
use simplex_kernels::hahn::{gasper_product, h_kernel, h_kernel_chi, u_norm, HahnContext};
use simplex_kernels::numkit::{compositions, format_rational, q, MultiIndex};

fn main() -> simplex_kernels::Result<()> {
    let size = 4;
    let ctx = HahnContext::new(DirichletParams::new(vec![q(1, 1), q(2, 1), q(1, 2)])?, size);
    let r = MultiIndex::new(vec![2, 1, 1]);
    for s in compositions(3, size).take(5) {
        let row: Vec<String> = (0..=size).map(|n| h_kernel(&ctx, n, &r, &s).map(|v| format_rational(&v))).collect::<Result<_, _>>()?;
        println!("H_n({:?}, {:?}) = [{}]", r.parts(), s.parts(), row.join(", "));
        for n in 0..=size {
            assert_eq!(h_kernel(&ctx, n, &r, &s)?, h_kernel_chi(&ctx, n, &r, &s)?);
        }
    }

    let (a, b) = (q(1, 1), q(2, 1));
    let two = HahnContext::new(DirichletParams::new(vec![a.clone(), b.clone()])?, 5);
    let (r, s) = (MultiIndex::new(vec![3, 2]), MultiIndex::new(vec![1, 4]));
    for n in 0..=5 {
        let product = u_norm(&a, &b, 5, n)? * gasper_product(&a, &b, n, 3, 1, 5)?;
        assert_eq!(product, h_kernel(&two, n, &r, &s)?);
        println!("n = {n}: product formula {}", format_rational(&product));
    }
    Ok(())
}
