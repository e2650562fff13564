//! Monte Carlo check of the Z-chain: a univariate Jacobi kernel averaged
//! over the chain reproduces the multivariate kernel.

use simplex_kernels::dist::{DirichletParams, SimplexPoint};
use simplex_kernels::intrep::{verify_kernel_representation, verify_z_moments};

fn main() -> simplex_kernels::Result<()> {
    let alpha = DirichletParams::new(vec![2.0, 2.0, 1.0])?;
    let x = SimplexPoint::new(vec![0.2, 0.5, 0.3])?;
    let y = SimplexPoint::new(vec![0.6, 0.1, 0.3])?;
    let draws = 200_000;
    println!("kernel representation, {draws} draws");
    for c in verify_kernel_representation(&alpha, &x, &y, 4, draws, 11)? {
        println!("  n = {}  estimate {:+.5} +- {:.5}  exact {:+.5}  z {:+.2}", c.degree, c.estimate.mean, c.estimate.se, c.exact, c.z);
    }
    println!("moments of Z_3");
    for c in verify_z_moments(&alpha, &x, &y, 3, draws, 12)? {
        println!("  m = {}  estimate {:.5} +- {:.5}  exact {:.5}  z {:+.2}", c.degree, c.estimate.mean, c.estimate.se, c.exact, c.z);
    }
    Ok(())
}
