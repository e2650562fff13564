//! Canonical correlation sequences: from mixing pmfs to sequences and back,
//! the Wright-Fisher sequence and its coalescent pmf, and positivity scans.

use simplex_kernels::dist::DirichletParams;
use simplex_kernels::numkit::{format_rational, q, Field, Rational};
use simplex_kernels::pds::{
    coalescent_pmf, dirac_sequence, jpds_to_hpds, jpds_to_pmf, pmf_to_jpds, scan_hpds, scan_jpds, wf_sequence,
    DegreeSequence, DEFAULT_RESOLUTION,
};

fn show(seq: &DegreeSequence<Rational>) -> String {
    seq.values().iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn main() -> simplex_kernels::Result<()> {
    let theta = q(2, 1);
    let pmf = DegreeSequence::new(vec![q(1, 4), q(0, 1), q(1, 2), q(1, 4)], "example");
    let rho = pmf_to_jpds(&theta, &pmf, 5)?;
    println!("rho         = [{}]", show(&rho));
    println!("point mass  = [{}]", show(&dirac_sequence(&theta, 2, 5)));
    let back = jpds_to_pmf(&theta, &rho)?;
    println!("recovered   = [{}]  is pmf: {}", show(&back.pmf), back.is_pmf());

    let wf = wf_sequence(2.0, 0.5, 40)?;
    let lineages = coalescent_pmf(2.0, 0.5, 40)?;
    let head: Vec<String> = lineages.values().iter().take(6).map(|v| format!("{v:.4}")).collect();
    println!("coalescent lineages at t = 0.5: [{}, ...]", head.join(", "));

    let alpha = DirichletParams::new(vec![1.0, 1.0])?;
    println!("WF scan:      {}", scan_jpds(&alpha, &wf, DEFAULT_RESOLUTION, 40)?.verdict());
    let bad = DegreeSequence::new(vec![1.0, -1.0], "anti");
    let rep = scan_jpds(&alpha, &bad, DEFAULT_RESOLUTION, 1)?;
    println!("rho = (1, -1): {} at {:?}", rep.verdict(), rep.witness().map(|w| (&w.x, &w.y)));

    // exact WF image for four draws: a proof of positivity
    let exact = DegreeSequence::new(wf.values().iter().map(|&v| Rational::from_f64(v)).collect(), "wf");
    let alpha = DirichletParams::new(vec![q(1, 1), q(1, 1)])?;
    let hpds = jpds_to_hpds(&theta, 4, &exact);
    println!("HPDS at N = 4: {}", scan_hpds(&alpha, 4, &hpds)?.verdict());
    Ok(())
}
