//! A Beta mixture of extreme points whose "pmf" fails to exist: the
//! derivatives of `q(s) = E[exp(-lambda W s)]` alternate in sign.

use simplex_kernels::numkit::{format_rational, q};
use simplex_kernels::pds::{counterexample_check, shift_parameters, wf_sequence};

fn main() -> simplex_kernels::Result<()> {
    let rep = counterexample_check(5.0, 2.0, 4)?;
    println!("quadrature: {} nodes, change {:.1e}", rep.nodes, rep.quadrature_error);
    for d in &rep.derivatives {
        println!("order {}: range [{:+.4}, {:+.4}]", d.order, d.min, d.max);
    }
    if let Some((k, s, v)) = rep.violation {
        println!("order {k} derivative is {v:.4} at s = {s}, so q is not a pgf (alternating: {})", rep.alternating);
    }

    let wf = wf_sequence(2.0, 1.0, 6)?;
    let shifted = shift_parameters(&1.0, &1.0, &0.5, &wf)?;
    println!("WF under (1, 1):     {:?}", &wf.values()[..4]);
    println!("shifted to (3/2, 1/2): {:?}", &shifted.values()[..4]);
    let flat = shift_parameters(&q(1, 1), &q(1, 1), &q(1, 1), &simplex_kernels::pds::dirac_sequence(&q(2, 1), 3, 4))?;
    let flat: Vec<String> = flat.values().iter().map(format_rational).collect();
    println!("point mass shifted by mu = beta: [{}]", flat.join(", "));
    Ok(())
}
