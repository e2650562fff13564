//! Gibbs copulas with Dirichlet marginals and their canonical correlations,
//! on the simplex and on Poisson-Dirichlet ranked frequencies.

use simplex_kernels::copula::{
    estimate_canonical_correlation, estimate_pd_correlation, sample_pairs, sample_pairs_pd, CopulaSpec, Estimator, PdCopulaSpec,
};
use simplex_kernels::dist::DirichletParams;
use simplex_kernels::pds::{dirac_sequence, DegreeSequence};

fn main() -> simplex_kernels::Result<()> {
    let alpha = DirichletParams::new(vec![1.0, 1.0, 2.0])?;
    let pmf = DegreeSequence::new(vec![0.2, 0.3, 0.5], "mix");
    let spec = CopulaSpec::new(alpha.clone(), pmf.clone())?;
    let pairs = sample_pairs(&spec, 100_000, 3);
    let rho = simplex_kernels::pds::pmf_to_jpds(&4.0, &pmf, 3)?;
    for n in 1..=3 {
        let kernel = estimate_canonical_correlation(&pairs, &alpha, n, Estimator::Kernel)?;
        let coord = estimate_canonical_correlation(&pairs, &alpha, n, Estimator::Coordinate(2))?;
        println!(
            "rho_{n}: exact {:.4}  kernel {:.4} +- {:.4}  coordinate {:.4} +- {:.4}",
            rho.get(n), kernel.mean, kernel.se, coord.mean, coord.se
        );
    }

    let pd = PdCopulaSpec::new(1.0, DegreeSequence::new(vec![0.0, 0.0, 1.0], "point mass"), 200)?;
    let pairs = sample_pairs_pd(&pd, 50_000, 4)?;
    let est = estimate_pd_correlation(&pairs, 1.0)?;
    println!("PD(1), point mass at 2: rho_2 = {:.4} +- {:.4} (exact {:.4})", est.mean, est.se, dirac_sequence(&1.0, 2, 2).get(2));
    Ok(())
}
