//! Bernstein-type approximation of the Wright-Fisher sequence by sequences
//! that are positive definite for both the Dirichlet and the
//! Dirichlet-multinomial marginals.

use std::time::Instant;

use simplex_kernels::dist::DirichletParams;
use simplex_kernels::numkit::{q, Field};
use simplex_kernels::pds::{bernstein_approx, scan_hpds, wf_sequence};

fn main() -> simplex_kernels::Result<()> {
    let alpha = DirichletParams::new(vec![q(1, 1), q(1, 1)])?;
    let wf = wf_sequence(2.0, 1.0, 40)?;
    for size in [8, 16, 32, 64] {
        let start = Instant::now();
        let approx = bernstein_approx(&alpha, &wf, size, 40)?;
        let verdict = scan_hpds(&alpha, size, &approx)?.verdict();
        print!("N = {size:>2}  {verdict}");
        for n in 1..=3 {
            print!("  |rho^N_{n} - rho_{n}| = {:.2e}", (approx.get(n).to_f64() - wf.get(n)).abs());
        }
        println!("  ({:.1?})", start.elapsed());
    }
    Ok(())
}
