//! Maps between pmfs on `{0, 1, ...}`, Jacobi PDSs and Hahn PDSs.
//!
//! A pmf `d` mixes the kernels `xi_m`, and
//! `sum_m d_m xi_m = sum_n rho_n Q_n` with `rho_n = sum_{m>=n} c_{mn} d_m`.
//! Since `c_{mn} = m_[n] / (theta+m)_(n)` lies in `[0, 1]`, truncating the
//! pmf moves each `rho_n` by at most the dropped mass. The inverse
//! `d_m = sum_{n>=m} a_{nm} rho_n` is an alternating series.

use rayon::prelude::*;

use super::scan::{hahn_table, scan_hpds, scan_jpds, DEFAULT_RESOLUTION};
use super::{DegreeSequence, PositivityReport};
use crate::dist::{dm_pmf, DirichletParams, SimplexPoint};
use crate::error::{invalid, Error, Result};
use crate::jacobi::{coeff_a, coeff_c, r_coefficients, xi_all, zeta, KernelTable};
use crate::numkit::mc::install;
use crate::numkit::{binomial, falling, rising, Field, Flavor, MultiIndex};

/// The point mass at `l` as a pmf.
pub fn dirac_pmf<F: Field>(l: u32) -> DegreeSequence<F> {
    let mut v = vec![F::zero(); l as usize + 1];
    v[l as usize] = F::one();
    DegreeSequence::new(v, format!("dirac-pmf(l={l})"))
}

/// `rho_n = sum_{m>=n} m_[n] / (theta+m)_(n) d_m` for `n <= nmax`.
pub fn pmf_to_jpds<F: Field>(theta: &F, pmf: &DegreeSequence<F>, nmax: u32) -> Result<DegreeSequence<F>> {
    pmf.check_pmf()?;
    let d = pmf.values();
    let mut rho = Vec::with_capacity(nmax as usize + 1);
    for n in 0..=nmax {
        let mut s = F::zero();
        for (m, dm) in d.iter().enumerate().skip(n as usize) {
            if !dm.is_zero() {
                s = s + coeff_c(theta, m as u32, n)? * dm;
            }
        }
        rho.push(s);
    }
    let total = d.iter().fold(F::zero(), |s, v| s + v);
    let dropped = (1.0 - total.to_f64()).max(0.0);
    Ok(DegreeSequence::new(rho, format!("pmf-to-jpds({})", pmf.provenance())).with_tail_bound(dropped))
}

/// `a_{nm}` in floating point, arranged so that no intermediate overflows
/// before the value itself does.
fn coeff_a_f64(theta: f64, n: u32, m: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    // (theta+m)_(n-1) / (n-1)! * C(n, m) / n
    let mut v = 1.0;
    for i in 1..n {
        v *= (theta + (m + i - 1) as f64) / i as f64;
    }
    let mut c = 1.0;
    for i in 0..m {
        c *= (n - i) as f64 / (i + 1) as f64;
    }
    let sign = if (n - m) % 2 == 0 { 1.0 } else { -1.0 };
    sign * (theta + (2 * n - 1) as f64) * v * c / n as f64
}

/// Neumaier's compensated sum; exact inputs skip the compensation.
fn compensated_sum<F: Field>(terms: &[F]) -> F {
    if terms.first().is_none_or(|t| t.flavor() == Flavor::Exact) {
        return terms.iter().fold(F::zero(), |s, t| s + t);
    }
    let (mut s, mut c) = (F::zero(), F::zero());
    for t in terms {
        let u = s.clone() + t;
        c = if s.abs() >= t.abs() { c + ((s.clone() - &u) + t) } else { c + ((t.clone() - &u) + &s) };
        s = u;
    }
    s + c
}

/// Result of inverting a sequence back to a candidate pmf.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfInversion<F> {
    pub pmf: DegreeSequence<F>,
    /// Indices with `d_m < 0`.
    pub negative: Vec<u32>,
    pub mass: F,
    /// Largest `|a_{Tm} rho_T|`, relative to `max(1, |d_m|)`: the Cauchy
    /// test on the final partial sums.
    pub last_term: f64,
    /// Largest `sum_n |a_{nm} rho_n|`, the scale of cancellation.
    pub magnitude: f64,
    pub converged: bool,
}

/// Tolerance for the Cauchy test and for float mass checks.
const INVERSION_TOL: f64 = 1e-10;

impl<F: Field> PmfInversion<F> {
    /// Converged, nonnegative and of unit mass (exactly, or within `1e-8`).
    pub fn is_pmf(&self) -> bool {
        let unit = match self.mass.flavor() {
            Flavor::Exact => self.mass == F::one(),
            Flavor::Float => (self.mass.to_f64() - 1.0).abs() <= 1e-8,
        };
        self.converged && self.negative.is_empty() && unit
    }

    /// Fails with [`Error::Divergence`] when the Cauchy test failed.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Divergence(format!(
                "partial sums not settled: last term {:.3e}, term magnitude {:.3e}",
                self.last_term, self.magnitude
            )))
        }
    }
}

/// `d_m = sum_{m<=n<=T} a_{nm} rho_n` with `T` the last stored degree.
///
/// A sequence whose tail bound is zero is taken as complete; otherwise the
/// last terms must be negligible for the sums to count as settled.
///
/// The report flags negative entries, the mass and whether the alternating
/// sums settled at working precision. It does not decide whether the
/// untruncated sequence is the image of a pmf.
pub fn jpds_to_pmf<F: Field>(theta: &F, rho: &DegreeSequence<F>) -> Result<PmfInversion<F>> {
    if theta.to_f64() <= 0.0 {
        return Err(invalid("theta", "total parameter must be positive"));
    }
    let top = rho.max_degree();
    let exact = theta.flavor() == Flavor::Exact && rho.flavor() == Flavor::Exact;
    let rows: Vec<(F, f64, f64)> = install(|| {
        (0..=top)
            .into_par_iter()
            .map(|m| {
                let terms: Vec<F> = (m..=top)
                    .map(|n| {
                        let a = if exact { coeff_a(theta, n, m).expect("theta > 0") } else { F::from_f64(coeff_a_f64(theta.to_f64(), n, m)) };
                        a * rho.get(n)
                    })
                    .collect();
                let dm = compensated_sum(&terms);
                let last = terms.last().expect("m <= top").to_f64().abs() / dm.to_f64().abs().max(1.0);
                let mag = terms.iter().map(|t| t.to_f64().abs()).sum::<f64>();
                (dm, last, mag)
            })
            .collect()
    });
    if rows.iter().any(|(d, _, mag)| !d.to_f64().is_finite() || !mag.is_finite()) {
        return Err(Error::Divergence(format!("coefficients overflow at truncation {top}")));
    }
    // a zero tail bound marks a complete sequence, which has no tail to test
    let complete = rho.tail_bound() == Some(0.0);
    let last_term = if complete { 0.0 } else { rows.iter().map(|r| r.1).fold(0.0, f64::max) };
    let magnitude = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let rounding = if exact { 0.0 } else { magnitude * f64::EPSILON };
    let converged = last_term <= INVERSION_TOL && rounding <= INVERSION_TOL;
    let values: Vec<F> = rows.into_iter().map(|r| r.0).collect();
    let negative = values.iter().enumerate().filter(|(_, v)| v.is_negative()).map(|(m, _)| m as u32).collect();
    let mass = values.iter().fold(F::zero(), |s, v| s + v);
    Ok(PmfInversion {
        pmf: DegreeSequence::new(values, format!("jpds-to-pmf({})", rho.provenance())),
        negative,
        mass,
        last_term,
        magnitude,
        converged,
    })
}

/// The same inversion read off `p_rho(x) = p_rho(x, 1) = sum_n rho_n zeta_n R_n(x)`
/// for `d = 2`: `d_m = (alpha)_(m) / (theta)_(m) [x^m] p_rho(x)`, that is the
/// `m`-th derivative at 0 divided by `m!`.
pub fn pmf_by_derivatives<F: Field>(alpha: &F, beta: &F, rho: &DegreeSequence<F>) -> Vec<F> {
    let top = rho.max_degree() as usize;
    let theta = alpha.clone() + beta;
    let mut coef = vec![F::zero(); top + 1];
    for n in 0..=top as u32 {
        let w = rho.get(n) * zeta(alpha, beta, n);
        if w.is_zero() {
            continue;
        }
        // R_n = sum_k c_k (1-x)^k, and (1-x)^k contributes C(k,m)(-1)^m x^m
        for (k, c) in r_coefficients(alpha, beta, n).iter().enumerate() {
            for (m, slot) in coef.iter_mut().enumerate().take(k + 1) {
                let b = F::from_bigint(&binomial(k as u32, m as u32));
                let t = w.clone() * c * b;
                *slot = if m % 2 == 0 { slot.clone() + t } else { slot.clone() - t };
            }
        }
    }
    coef.into_iter()
        .enumerate()
        .map(|(m, c)| c * rising(alpha, m as u32) / rising(&theta, m as u32))
        .collect()
}

/// `sum_m d_m xi_m(x, y)`, the mixture density of a pmf.
pub fn mixture_density<F: Field>(alpha: &DirichletParams<F>, pmf: &DegreeSequence<F>, x: &SimplexPoint<F>, y: &SimplexPoint<F>) -> Result<F> {
    let xis = xi_all(alpha, pmf.max_degree(), x, y)?;
    Ok(pmf.values().iter().zip(xis).fold(F::zero(), |s, (d, v)| s + d.clone() * v))
}

/// Lineage-count pmf of the coalescent at time `t`, the inverse image of
/// the Wright-Fisher eigenvalues, truncated at `mmax`.
pub fn coalescent_pmf(theta: f64, t: f64, mmax: u32) -> Result<DegreeSequence<f64>> {
    if !(t > 0.0) {
        return Err(invalid("t", "time must be positive"));
    }
    let rho = super::wf_sequence(theta, t, mmax)?;
    let inv = jpds_to_pmf(&theta, &rho)?.require_converged()?;
    Ok(DegreeSequence::new(inv.pmf.values().to_vec(), format!("coalescent(theta={theta}, t={t})")))
}

/// `rho_n N_[n] / (theta+N)_(n)` for `n <= N`, which turns a JPDS into an
/// HPDS for `DM(.; N)`.
pub fn jpds_to_hpds<F: Field>(theta: &F, size: u32, rho: &DegreeSequence<F>) -> DegreeSequence<F> {
    let big = F::from_i64(size as i64);
    let top = theta.clone() + &big;
    let values = (0..=rho.max_degree().min(size))
        .map(|n| rho.get(n) * falling(&big, n) / rising(&top, n))
        .collect();
    DegreeSequence::new(values, format!("jpds-to-hpds(N={size}, {})", rho.provenance()))
}

/// `rho^N_n = E[Q_n(X, Y) B_N p_rho(X, Y)]`, normalized so `rho^N_0 = 1`,
/// for `d = 2`.
///
/// With `I, J ~ DM(.; N)` this is
/// `N_[n] / (theta+N)_(n) E[p_rho(I/N, J/N) H_n(I, J)]`, summed over
/// `0 <= i, j <= N`. The values of `p_rho` come from the float series at
/// `truncation` and enter the sum as exact binary fractions, so every later
/// step is exact for rational `F`. Each `rho^N` is both a JPDS and an HPDS
/// at `N`, and `rho^N_n -> rho_n`.
pub fn bernstein_approx<F: Field>(
    alpha: &DirichletParams<F>,
    rho: &DegreeSequence<f64>,
    size: u32,
    truncation: u32,
) -> Result<DegreeSequence<F>> {
    if alpha.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: alpha.dim() });
    }
    if size == 0 {
        return Err(invalid("N", "N must be positive"));
    }
    if truncation > rho.max_degree() {
        return Err(Error::DegreeOutOfRange { n: truncation, bound: rho.max_degree() });
    }
    let table = KernelTable::new(&alpha.to_f64(), truncation)?;
    let nf = size as f64;
    let vals: Vec<Vec<Vec<f64>>> =
        (0..=size).map(|i| table.orthonormal_values(&[i as f64 / nf, (size - i) as f64 / nf])).collect();
    let w: Vec<f64> = (0..=truncation).map(|n| rho.get(n)).collect();
    let p: Vec<Vec<F>> = (0..=size as usize)
        .map(|i| {
            (0..=size as usize)
                .map(|j| {
                    let k = KernelTable::kernels_from(&vals[i], &vals[j]);
                    F::from_f64(w.iter().zip(&k).map(|(a, b)| a * b).sum())
                })
                .collect()
        })
        .collect();
    let (a, b) = (&alpha.alpha()[0], &alpha.alpha()[1]);
    let (h, u) = hahn_table(a, b, size, size)?;
    let dm: Vec<F> = (0..=size).map(|i| dm_pmf(alpha, &MultiIndex::new(vec![i, size - i]))).collect();
    let big = F::from_i64(size as i64);
    let top = alpha.total().clone() + &big;
    let raw: Vec<F> = install(|| {
        (0..=size as usize)
            .into_par_iter()
            .map(|n| {
                let v: Vec<F> = (0..=size as usize).map(|i| dm[i].clone() * &h[n][i]).collect();
                let quad = p.iter().zip(&v).fold(F::zero(), |acc, (row, vi)| {
                    let inner = row.iter().zip(&v).fold(F::zero(), |s, (pij, vj)| s + pij.clone() * vj);
                    acc + inner * vi
                });
                quad * &u[n] * falling(&big, n as u32) / rising(&top, n as u32)
            })
            .collect()
    });
    let norm = raw[0].clone();
    if norm.is_zero() || norm.is_negative() {
        return Err(Error::Divergence("Bernstein average of p_rho is not positive".into()));
    }
    Ok(DegreeSequence::new(
        raw.into_iter().map(|v| v / &norm).collect(),
        format!("bernstein(N={size}, {})", rho.provenance()),
    ))
}

/// The sequence of a pmf supported on `{0..N}` with both positivity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPmfReport<F> {
    pub rho: DegreeSequence<F>,
    pub hpds: PositivityReport,
    pub jpds: PositivityReport,
}

/// Maps a pmf on `{0..N}` to its sequence, certifies it as an HPDS at `N`
/// by exhaustive scan and scans it as a JPDS on the default grid.
pub fn truncated_pmf_pds<F: Field>(alpha: &DirichletParams<F>, pmf: &DegreeSequence<F>, size: u32) -> Result<TruncatedPmfReport<F>> {
    if let Some(m) = pmf.values().iter().enumerate().skip(size as usize + 1).find(|(_, v)| !v.is_zero()).map(|(m, _)| m) {
        return Err(invalid("pmf", format!("mass at {m} outside the support {{0..{size}}}")));
    }
    let rho = pmf_to_jpds(alpha.total(), pmf, size)?;
    let hpds = scan_hpds(alpha, size, &rho)?;
    let jpds = scan_jpds(&alpha.to_f64(), &rho.to_f64(), DEFAULT_RESOLUTION, size)?;
    Ok(TruncatedPmfReport { rho, hpds, jpds })
}

#[cfg(test)]
mod tests {
    use super::super::{dirac_sequence, poisson_sequence, wf_sequence, Verdict};
    use super::*;
    use crate::jacobi::q_kernels;
    use crate::numkit::{q, Rational};
    use proptest::prelude::*;

    #[test]
    fn dirac_images() {
        let theta = q(5, 2);
        for l in 0..=6 {
            let rho = pmf_to_jpds(&theta, &dirac_pmf(l), 8).unwrap();
            assert_eq!(rho.values(), dirac_sequence(&theta, l, 8).values());
            assert_eq!(rho.tail_bound(), Some(0.0));
        }
        let indep = pmf_to_jpds(&theta, &dirac_pmf(0), 4).unwrap();
        assert_eq!(indep.values(), &[q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
        let bad = DegreeSequence::new(vec![q(1, 2), q(1, 3)], "short");
        assert!(pmf_to_jpds(&theta, &bad, 2).is_err());
    }

    #[test]
    fn float_coefficients_match() {
        for (n, m) in [(0, 0), (1, 0), (5, 2), (12, 12), (20, 7)] {
            let exact: Rational = coeff_a(&q(3, 2), n, m).unwrap();
            let f = coeff_a_f64(1.5, n, m);
            assert!((f - exact.to_f64()).abs() <= 1e-13 * f.abs().max(1.0), "{n} {m}");
        }
    }

    fn pmf_strategy() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..20, 1..=9).prop_filter("nonzero", |v| v.iter().any(|&w| w > 0))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn round_trip_is_identity(weights in pmf_strategy(), num in 1i64..12, den in 1i64..5) {
            let total: u32 = weights.iter().sum();
            let pmf = DegreeSequence::new(weights.iter().map(|&w| q(w as i64, total as i64)).collect(), "random");
            let theta = q(num, den);
            let rho = pmf_to_jpds(&theta, &pmf, pmf.max_degree()).unwrap();
            let back = jpds_to_pmf(&theta, &rho).unwrap();
            prop_assert_eq!(back.pmf.values(), pmf.values());
            prop_assert!(back.is_pmf());
        }
    }

    #[test]
    fn derivative_route_agrees() {
        let (a, b) = (q(1, 2), q(3, 2));
        let theta = a.clone() + &b;
        let pmf = DegreeSequence::new(vec![q(1, 8), q(0, 1), q(3, 8), q(1, 4), q(1, 4)], "mix");
        let rho = pmf_to_jpds(&theta, &pmf, 4).unwrap();
        assert_eq!(pmf_by_derivatives(&a, &b, &rho), pmf.values());
        let poisson = poisson_sequence(&q(1, 3), 10);
        assert_eq!(pmf_by_derivatives(&a, &b, &poisson), jpds_to_pmf(&theta, &poisson).unwrap().pmf.values());
    }

    #[test]
    fn mixture_equals_kernel_series() {
        // sum_m d_m xi_m = sum_n rho_n Q_n, for d = 2 and 3
        let pmf = DegreeSequence::new(vec![q(1, 6), q(1, 3), q(0, 1), q(1, 2)], "mix");
        for alpha in [vec![q(1, 1), q(2, 1)], vec![q(1, 2), q(3, 2), q(1, 1)]] {
            let alpha = DirichletParams::new(alpha).unwrap();
            let rho = pmf_to_jpds(alpha.total(), &pmf, 3).unwrap();
            let d = alpha.dim();
            let x = SimplexPoint::new((0..d).map(|i| q(i as i64 + 1, (d * (d + 1) / 2) as i64)).collect()).unwrap();
            let y = SimplexPoint::new((0..d).map(|i| q((d - i) as i64, (d * (d + 1) / 2) as i64)).collect()).unwrap();
            let lhs = mixture_density(&alpha, &pmf, &x, &y).unwrap();
            let qs = q_kernels(&alpha, 3, &x, &y).unwrap();
            let rhs = rho.values().iter().zip(qs).fold(q(0, 1), |s, (r, k)| s + r.clone() * k);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn coalescent_round_trip() {
        let pmf = coalescent_pmf(2.0, 1.0, 80).unwrap();
        assert!(pmf.values().iter().all(|&v| v >= 0.0));
        assert!((pmf.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let rho = pmf_to_jpds(&2.0, &pmf, 4).unwrap();
        for n in 0..=4u32 {
            let want = (-0.5 * n as f64 * (n as f64 + 1.0)).exp();
            assert!((rho.get(n) - want).abs() < 1e-10, "n={n}");
        }
        let inv = jpds_to_pmf(&2.0, &wf_sequence(2.0, 1.0, 60).unwrap()).unwrap();
        assert!(inv.is_pmf());
        assert!((inv.mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn poisson_kernel_inversion() {
        // the report only describes the truncated inversion
        let inv = jpds_to_pmf(&q(1, 1), &poisson_sequence(&q(9, 10), 40)).unwrap();
        assert!(!inv.converged);
        assert!(!inv.is_pmf());
        let floaty = jpds_to_pmf(&1.0, &poisson_sequence(&0.9, 40)).unwrap();
        assert!(floaty.require_converged().is_err());
        let small = jpds_to_pmf(&1.0, &poisson_sequence(&0.1, 40)).unwrap();
        assert!(small.converged);
    }

    #[test]
    fn hpds_images() {
        let a = DirichletParams::new(vec![q(1, 1), q(1, 1)]).unwrap();
        let theta = q(2, 1);
        assert_eq!(jpds_to_hpds(&theta, 4, &dirac_sequence(&theta, 0, 6)).values(), &[q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
        let wf = wf_sequence(2.0, 1.0, 10).unwrap();
        let exact = DegreeSequence::new(wf.values().iter().map(|&v| Rational::from_f64(v)).collect(), "wf");
        let h = jpds_to_hpds(&theta, 4, &exact);
        assert_eq!(h.len(), 5);
        assert_eq!(scan_hpds(&a, 4, &h).unwrap().verdict(), Verdict::CertifiedPositive);
        let lemma = dirac_sequence(&theta, 3, 4);
        assert_eq!(scan_hpds(&a, 4, &h.product(&lemma)).unwrap().verdict(), Verdict::CertifiedPositive);
        // the sequence zoo at small N
        let zoo = [exact.clone(), poisson_sequence(&q(1, 2), 10), dirac_sequence(&theta, 2, 10)];
        for rho in &zoo {
            for size in 1..=5 {
                assert!(scan_hpds(&a, size, &jpds_to_hpds(&theta, size, rho)).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn bernstein() {
        let a = DirichletParams::new(vec![q(1, 1), q(1, 1)]).unwrap();
        let one = DegreeSequence::new(vec![1.0], "independence");
        let b = bernstein_approx(&a, &one, 6, 0).unwrap();
        assert!(b.values().iter().skip(1).all(|v| v.is_zero()));
        assert_eq!(b.values()[0], q(1, 1));
        let wf = wf_sequence(2.0, 1.0, 40).unwrap();
        let b16 = bernstein_approx(&a, &wf, 16, 40).unwrap();
        assert!(scan_hpds(&a, 16, &b16).unwrap().verdict() == Verdict::CertifiedPositive);
        let af = a.to_f64();
        assert!(scan_jpds(&af, &b16.to_f64(), 20, 16).unwrap().is_positive());
        let b32 = bernstein_approx(&af, &wf, 32, 40).unwrap();
        for n in 1..=3 {
            let e16 = (b16.get(n).to_f64() - wf.get(n)).abs();
            let e32 = (b32.get(n) - wf.get(n)).abs();
            assert!(e32 < e16, "n={n}: {e32} vs {e16}");
        }
        let a3 = DirichletParams::new(vec![q(1, 1), q(1, 1), q(1, 1)]).unwrap();
        assert!(bernstein_approx(&a3, &wf, 4, 4).is_err());
    }

    #[test]
    fn truncated_pmf_reports() {
        let a = DirichletParams::new(vec![q(1, 1), q(1, 1)]).unwrap();
        let rep = truncated_pmf_pds(&a, &dirac_pmf(3), 3).unwrap();
        assert_eq!(rep.hpds.verdict(), Verdict::CertifiedPositive);
        assert!(rep.jpds.is_positive());
        let uniform = DegreeSequence::new(vec![q(1, 4); 4], "uniform");
        let rep = truncated_pmf_pds(&a, &uniform, 3).unwrap();
        assert_eq!(rep.hpds.verdict(), Verdict::CertifiedPositive);
        assert!(rep.jpds.is_positive());
        assert!(truncated_pmf_pds(&a, &dirac_pmf(4), 3).is_err());
        let negative = DegreeSequence::new(vec![q(3, 2), q(-1, 2)], "bad");
        assert!(truncated_pmf_pds(&a, &negative, 3).is_err());
    }
}
