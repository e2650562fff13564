//! Seeded samplers: Dirichlet points, Dirichlet-multinomial counts and
//! Poisson-Dirichlet ranked weights, with their first moments.

use simplex_kernels::dist::{sample_dirichlet, sample_dm, sample_pd, DirichletParams, RngStream};
use simplex_kernels::numkit::stats::Welford;

fn main() -> simplex_kernels::Result<()> {
    let alpha = DirichletParams::new(vec![0.5, 1.5, 2.0])?;
    let mut rng = RngStream::new(2024);
    let (mut x0, mut r0, mut h) = (Welford::new(), Welford::new(), Welford::new());
    for _ in 0..50_000 {
        x0.push(sample_dirichlet(&alpha, &mut rng).coords()[0]);
        r0.push(sample_dm(&alpha, 10, &mut rng).parts()[0] as f64);
        h.push(sample_pd(1.0, 200, &mut rng)?.homozygosity());
    }
    println!("E[X_1]        = {:.4} (exact {:.4})", x0.mean(), 0.5 / 4.0);
    println!("E[R_1], N=10  = {:.4} (exact {:.4})", r0.mean(), 10.0 * 0.5 / 4.0);
    println!("E[sum w^2]    = {:.4} (exact 0.5), Var = {:.4} (exact 1/24 = {:.4})", h.mean(), h.variance(), 1.0 / 24.0);
    Ok(())
}
