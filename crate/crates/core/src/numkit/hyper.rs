//! Terminating generalized hypergeometric series.

use super::combinat::rising;
use super::scalar::Field;
use crate::error::{Error, Result};

/// `pFq(num; den; z)` summed through term `n`, where some numerator
/// parameter equals `-n`.
///
/// Terms are built by the ratio recurrence. Once a numerator factor hits
/// zero the remaining terms vanish and the loop stops, so a denominator
/// factor is only reported when it vanishes before that point.
pub fn hyp_terminating<F: Field>(num: &[F], den: &[F], z: &F, n: u32) -> Result<F> {
    let minus_n = F::from_i64(-(n as i64));
    if !num.iter().any(|a| *a == minus_n) {
        return Err(Error::NotTerminating { n });
    }
    let mut term = F::one();
    let mut sum = F::one();
    for k in 0..n {
        let kf = F::from_i64(k as i64);
        let mut numer = F::one();
        for a in num {
            numer = numer * (a.clone() + &kf);
        }
        if numer.is_zero() {
            break;
        }
        let mut denom = F::from_i64(k as i64 + 1);
        for (j, b) in den.iter().enumerate() {
            let f = b.clone() + &kf;
            if f.is_zero() {
                return Err(Error::VanishingPochhammer {
                    factor: format!("denominator parameter {j} at term {}", k + 1),
                });
            }
            denom = denom * f;
        }
        term = term * numer * z / denom;
        sum = sum + &term;
    }
    Ok(sum)
}

pub fn hyp2f1<F: Field>(a: &F, b: &F, c: &F, z: &F, n: u32) -> Result<F> {
    hyp_terminating(&[a.clone(), b.clone()], &[c.clone()], z, n)
}

pub fn hyp3f2<F: Field>(a: [&F; 3], b: [&F; 2], z: &F, n: u32) -> Result<F> {
    hyp_terminating(
        &[a[0].clone(), a[1].clone(), a[2].clone()],
        &[b[0].clone(), b[1].clone()],
        z,
        n,
    )
}

/// Direct evaluation of the defining sum, used as an oracle.
pub fn hyp_direct<F: Field>(num: &[F], den: &[F], z: &F, n: u32) -> F {
    let mut sum = F::zero();
    let mut fact = F::one();
    for k in 0..=n {
        if k > 0 {
            fact = fact * F::from_i64(k as i64);
        }
        let mut t = z.powi(k);
        for a in num {
            t = t * rising(a, k);
        }
        let mut d = fact.clone();
        for b in den {
            d = d * rising(b, k);
        }
        if t.is_zero() {
            continue;
        }
        sum = sum + t / d;
    }
    sum
}
