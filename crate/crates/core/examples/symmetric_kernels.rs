//! Kernels on ranked frequencies: symmetric Dirichlet in `d` dimensions, its
//! Poisson-Dirichlet limit, and the Ewens kernels on partitions.

use simplex_kernels::dist::RankedPoint;
use simplex_kernels::numkit::{format_rational, q, PartitionProfile};
use simplex_kernels::symkern::{h_kernel_esf, h_kernel_ranked, q2_pd_closed_form, q_kernel_pd, q_kernel_ranked};

fn main() -> simplex_kernels::Result<()> {
    let theta = q(1, 1);
    let x = RankedPoint::from_unranked(vec![q(1, 2), q(1, 3), q(1, 6)])?;
    let y = RankedPoint::from_unranked(vec![q(3, 4), q(1, 4)])?;

    for d in [3, 5, 10] {
        let v = q_kernel_ranked(&theta, d, 2, &x, &y)?;
        println!("ranked d = {d:>2}: Q_2 = {}", format_rational(&v));
    }
    let pd = q_kernel_pd(&theta, 2, &x, &y)?;
    println!("Poisson-Dirichlet: Q_2 = {} (closed form {})", format_rational(&pd), format_rational(&q2_pd_closed_form(&theta, &x, &y)));

    let r = PartitionProfile::from_parts(vec![2, 1, 1]);
    let s = PartitionProfile::from_parts(vec![3, 1]);
    for n in 0..=4 {
        let esf = h_kernel_esf(&theta, 4, n, &r, &s)?;
        let ranked = h_kernel_ranked(&theta, 50, 4, n, &r, &s)?;
        println!("n = {n}: Ewens H_n = {:>10}, ranked d = 50: {:.6}", format_rational(&esf), simplex_kernels::numkit::scalar::rational_to_f64(&ranked));
    }
    Ok(())
}
