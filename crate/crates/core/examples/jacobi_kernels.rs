//! Dirichlet kernels `Q_n(x, y)` and the nonnegative `xi_m(x, y)` they are
//! built from, in exact rational arithmetic and in floating point.

use simplex_kernels::dist::{DirichletParams, SimplexPoint};
use simplex_kernels::jacobi::{q_kernels, xi_all, CoeffTriangle, KernelTable};
use simplex_kernels::numkit::{format_rational, q};

fn main() -> simplex_kernels::Result<()> {
    let alpha = DirichletParams::new(vec![q(1, 2), q(3, 2), q(1, 1)])?;
    let x = SimplexPoint::new(vec![q(1, 6), q(1, 3), q(1, 2)])?;
    let y = SimplexPoint::new(vec![q(1, 2), q(1, 4), q(1, 4)])?;

    let xis = xi_all(&alpha, 4, &x, &y)?;
    let kernels = q_kernels(&alpha, 4, &x, &y)?;
    println!("{:>3}  {:>28}  {:>28}", "n", "xi_n(x, y)", "Q_n(x, y)");
    for n in 0..=4 {
        println!("{n:>3}  {:>28}  {:>28}", format_rational(&xis[n]), format_rational(&kernels[n]));
    }

    // Q = A xi and xi = C Q
    let a = CoeffTriangle::a(alpha.total(), 4)?;
    let c = CoeffTriangle::c(alpha.total(), 4)?;
    assert_eq!(a.apply(&xis), kernels);
    assert_eq!(c.apply(&kernels), xis);
    println!("A C = I: {}", a.mul(&c).is_identity());

    // the orthonormal product basis stays accurate far past exact range
    let table = KernelTable::new(&alpha.to_f64(), 30)?;
    let k = table.kernels(x.to_f64().coords(), y.to_f64().coords());
    println!("float Q_4 = {:.12}, Q_30 = {:.6e}", k[4], k[30]);
    Ok(())
}
