//! The product formula `R_n(x) R_n(y) = E[R_n(Z)]` with `Z` drawn from the
//! explicit mixing measure, plus the Gasper-region test.

use simplex_kernels::dist::RngStream;
use simplex_kernels::intrep::{check_gasper_region, KoornwinderSampler};
use simplex_kernels::jacobi::r_values_f64;
use simplex_kernels::numkit::stats::Welford;

fn main() -> simplex_kernels::Result<()> {
    for (a, b) in [(1.0, 2.0), (0.3, 0.4), (0.5, 0.5)] {
        println!("alpha = {a}, beta = {b}: {}", check_gasper_region(a, b)?);
    }
    let (a, b, x, y) = (1.0, 2.0, 0.3, 0.8);
    let sampler = KoornwinderSampler::new(a, b)?;
    let mut rng = RngStream::new(5);
    let mut acc = vec![Welford::new(); 7];
    for _ in 0..100_000 {
        let r = r_values_f64(a, b, 6, sampler.sample(x, y, &mut rng));
        acc.iter_mut().zip(&r).for_each(|(w, v)| w.push(*v));
    }
    let (rx, ry) = (r_values_f64(a, b, 6, x), r_values_f64(a, b, 6, y));
    for n in 1..=6 {
        let e = acc[n].estimate();
        println!("n = {n}: E[R_n(Z)] = {:+.5} +- {:.5}, R_n(x) R_n(y) = {:+.5}", e.mean, e.se, rx[n] * ry[n]);
    }
    Ok(())
}
