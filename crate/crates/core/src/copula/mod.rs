//! Exchangeable pairs with Dirichlet (or Poisson-Dirichlet) marginals and
//! prescribed canonical correlations.
//!
//! The Gibbs scheme draws `X ~ D(alpha)`, a sample size `M` from a pmf
//! `d`, counts `l ~ Multinomial(M, X)` and `Y ~ D(alpha + l)`. The joint law
//! is `E[xi_M(x, y)] D(dx) D(dy)`, whose canonical correlations are
//! `rho_n = sum_m m_[n] / (theta+m)_(n) d_m`.
//!
//! The Poisson-Dirichlet version keeps the same three steps. Given the
//! occupied atoms of `X` with counts `c_1..c_k`, `Y` puts Dirichlet
//! weights `(V_1..V_k, V_0) ~ D(c_1..c_k, theta)` on fresh atoms and
//! spreads `V_0` as an independent `PD(theta)`. This is the limit of the
//! symmetric finite sampler as `d -> infinity`; the tests compare the two at
//! `d = 200`.

use crate::dist::{
    sample_dirichlet, sample_multinomial, sample_pd, DirichletParams, RankedPoint, RngStream, SimplexPoint, PD_TAIL_BUDGET,
};
use crate::error::{invalid, Error, Result};
use crate::jacobi::{orthonormal_f64, KernelTable};
use crate::numkit::mc::sharded_collect;
use crate::numkit::stats::{jackknife_mean, Estimate};
use crate::numkit::MultiIndex;
use crate::pds::DegreeSequence;
use crate::symkern::q2_pd_closed_form;

/// Parameters of the finite-dimensional Gibbs copula.
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaSpec {
    alpha: DirichletParams<f64>,
    pmf: DegreeSequence<f64>,
    cdf: Vec<f64>,
}

fn cumulative(pmf: &DegreeSequence<f64>) -> Result<Vec<f64>> {
    pmf.check_pmf()?;
    let mut acc = 0.0;
    Ok(pmf
        .values()
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect())
}

fn draw_size(cdf: &[f64], rng: &mut RngStream) -> u32 {
    if cdf.len() == 1 {
        return 0;
    }
    let u = rng.open01() * cdf[cdf.len() - 1];
    cdf.partition_point(|&c| c < u).min(cdf.len() - 1) as u32
}

impl CopulaSpec {
    pub fn new(alpha: DirichletParams<f64>, pmf: DegreeSequence<f64>) -> Result<Self> {
        let cdf = cumulative(&pmf)?;
        Ok(CopulaSpec { alpha, pmf, cdf })
    }

    /// The fixed-size scheme with `M = m`.
    pub fn dirac(alpha: DirichletParams<f64>, m: u32) -> Self {
        let pmf = crate::pds::dirac_pmf(m);
        CopulaSpec::new(alpha, pmf).expect("point mass is a pmf")
    }

    pub fn alpha(&self) -> &DirichletParams<f64> {
        &self.alpha
    }

    pub fn pmf(&self) -> &DegreeSequence<f64> {
        &self.pmf
    }

    /// `Some(m)` when the pmf is a point mass at `m`.
    pub fn degenerate(&self) -> Option<u32> {
        let mut hits = self.pmf.values().iter().enumerate().filter(|(_, &p)| p > 0.0);
        match (hits.next(), hits.next()) {
            (Some((m, _)), None) => Some(m as u32),
            _ => None,
        }
    }
}

/// One draw of the Gibbs scheme with its latent counts.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDraw {
    pub x: SimplexPoint<f64>,
    pub y: SimplexPoint<f64>,
    pub m: u32,
    pub counts: MultiIndex,
}

pub fn sample_pair_detailed(spec: &CopulaSpec, rng: &mut RngStream) -> PairDraw {
    let x = sample_dirichlet(&spec.alpha, rng);
    let m = draw_size(&spec.cdf, rng);
    let counts = sample_multinomial(m, x.coords(), rng);
    let y = sample_dirichlet(&spec.alpha.shifted(&counts), rng);
    PairDraw { x, y, m, counts }
}

pub fn sample_pair(spec: &CopulaSpec, rng: &mut RngStream) -> (SimplexPoint<f64>, SimplexPoint<f64>) {
    let d = sample_pair_detailed(spec, rng);
    (d.x, d.y)
}

/// `count` pairs, reproducible for a seed whatever the thread count.
pub fn sample_pairs(spec: &CopulaSpec, count: u64, seed: u64) -> Vec<(SimplexPoint<f64>, SimplexPoint<f64>)> {
    sharded_collect(count, seed, |rng| sample_pair(spec, rng))
}

/// Parameters of the Poisson-Dirichlet copula.
#[derive(Debug, Clone, PartialEq)]
pub struct PdCopulaSpec {
    theta: f64,
    pmf: DegreeSequence<f64>,
    cdf: Vec<f64>,
    truncation: usize,
}

impl PdCopulaSpec {
    /// `truncation` caps the number of atoms kept per point.
    pub fn new(theta: f64, pmf: DegreeSequence<f64>, truncation: usize) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(invalid("theta", "must be positive"));
        }
        if truncation == 0 {
            return Err(invalid("truncation", "must be at least 1"));
        }
        let cdf = cumulative(&pmf)?;
        Ok(PdCopulaSpec { theta, pmf, cdf, truncation })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn pmf(&self) -> &DegreeSequence<f64> {
        &self.pmf
    }
}

/// An exchangeable pair of ranked weight vectors with `PD(theta)` marginals.
pub fn sample_pair_pd(spec: &PdCopulaSpec, rng: &mut RngStream) -> Result<(RankedPoint<f64>, RankedPoint<f64>)> {
    let x = sample_pd(spec.theta, spec.truncation, rng)?;
    let m = draw_size(&spec.cdf, rng);
    // draws landing in the unlisted tail are distinct singletons
    let mut probs = x.weights().to_vec();
    probs.push(*x.tail());
    let l = sample_multinomial(m, &probs, rng);
    let (listed, dust) = l.parts().split_at(x.len());
    let mut shape: Vec<f64> = listed.iter().filter(|&&c| c > 0).map(|&c| c as f64).collect();
    shape.extend(std::iter::repeat_n(1.0, dust[0] as usize));
    shape.push(spec.theta);
    let v = sample_dirichlet(&DirichletParams::new(shape)?, rng);
    let (atoms, rest) = v.coords().split_at(v.dim() - 1);
    let fresh = sample_pd(spec.theta, spec.truncation, rng)?;
    let mut w: Vec<f64> = atoms.to_vec();
    w.extend(fresh.weights().iter().map(|f| f * rest[0]));
    w.sort_by(|a, b| b.total_cmp(a));
    let dropped: f64 = w.iter().skip(spec.truncation).sum::<f64>() + rest[0] * fresh.tail();
    if dropped >= PD_TAIL_BUDGET {
        return Err(Error::TailBudget { tail: dropped, budget: PD_TAIL_BUDGET });
    }
    w.truncate(spec.truncation);
    Ok((x, RankedPoint::from_unranked(w)?))
}

pub fn sample_pairs_pd(spec: &PdCopulaSpec, count: u64, seed: u64) -> Result<Vec<(RankedPoint<f64>, RankedPoint<f64>)>> {
    sharded_collect(count, seed, |rng| sample_pair_pd(spec, rng)).into_iter().collect()
}

/// How the canonical correlation of degree `n` is read off the pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// `Q_n(X, Y)` divided by the number of basis polynomials of degree
    /// `n`; uses every coordinate.
    Kernel,
    /// `P_n(X_j) P_n(Y_j)` with `P_n` orthonormal for the Beta marginal of
    /// coordinate `j`.
    Coordinate(usize),
}

/// Blocks used for jackknife standard errors.
const JACKKNIFE_GROUPS: usize = 50;

/// Estimates `rho_n` from exchangeable pairs, with a jackknife SE.
pub fn estimate_canonical_correlation(
    pairs: &[(SimplexPoint<f64>, SimplexPoint<f64>)],
    alpha: &DirichletParams<f64>,
    n: u32,
    estimator: Estimator,
) -> Result<Estimate> {
    if pairs.len() < 2 {
        return Err(invalid("pairs", "need at least two pairs"));
    }
    let values: Vec<f64> = match estimator {
        Estimator::Kernel => {
            let table = KernelTable::new(alpha, n)?;
            let count = table.count(n) as f64;
            pairs.iter().map(|(x, y)| table.kernels(x.coords(), y.coords())[n as usize] / count).collect()
        }
        Estimator::Coordinate(j) => {
            if j >= alpha.dim() {
                return Err(invalid("j", format!("coordinate {j} out of range")));
            }
            let (a, b) = alpha.marginal(j);
            pairs
                .iter()
                .map(|(x, y)| orthonormal_f64(a, b, n, x.coords()[j]) * orthonormal_f64(a, b, n, y.coords()[j]))
                .collect()
        }
    };
    Ok(jackknife_mean(&values, JACKKNIFE_GROUPS))
}

/// `rho_2` for Poisson-Dirichlet pairs from the degree-2 symmetric kernel
/// `(F(x) - mu)(F(y) - mu) / sigma^2`, `F = sum w_i^2`.
pub fn estimate_pd_correlation(pairs: &[(RankedPoint<f64>, RankedPoint<f64>)], theta: f64) -> Result<Estimate> {
    if pairs.len() < 2 {
        return Err(invalid("pairs", "need at least two pairs"));
    }
    let values: Vec<f64> = pairs.iter().map(|(x, y)| q2_pd_closed_form(&theta, x, y)).collect();
    Ok(jackknife_mean(&values, JACKKNIFE_GROUPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::mc::sharded;
    use crate::numkit::dirichlet_moment;
    use crate::pds::pmf_to_jpds;

    fn a(v: &[f64]) -> DirichletParams<f64> {
        DirichletParams::new(v.to_vec()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CopulaSpec::new(a(&[1.0, 1.0]), DegreeSequence::new(vec![0.5, 0.4], "")).is_err());
        let s = CopulaSpec::dirac(a(&[1.0, 1.0]), 3);
        assert_eq!(s.degenerate(), Some(3));
        let mix = CopulaSpec::new(a(&[1.0, 1.0]), DegreeSequence::new(vec![0.25; 4], "")).unwrap();
        assert_eq!(mix.degenerate(), None);
        assert!(PdCopulaSpec::new(0.0, crate::pds::dirac_pmf(1), 50).is_err());
    }

    #[test]
    fn independence_endpoint() {
        for alpha in [a(&[1.0, 1.0]), a(&[1.0, 2.0, 0.5])] {
            let pairs = sample_pairs(&CopulaSpec::dirac(alpha.clone(), 0), 40_000, 3);
            for n in 1..=2 {
                let e = estimate_canonical_correlation(&pairs, &alpha, n, Estimator::Kernel).unwrap();
                assert!(e.z_score(0.0).abs() <= 3.0, "n={n}: {e:?}");
            }
        }
    }

    #[test]
    fn dirac_copula_correlations() {
        let alpha = a(&[1.0, 1.0]);
        let pairs = sample_pairs(&CopulaSpec::dirac(alpha.clone(), 2), 40_000, 5);
        for n in 1..=2u32 {
            let want = crate::pds::dirac_sequence(&2.0, 2, 2).get(n);
            let e = estimate_canonical_correlation(&pairs, &alpha, n, Estimator::Coordinate(0)).unwrap();
            assert!(e.z_score(want).abs() <= 3.0, "n={n}: {e:?} vs {want}");
        }
    }

    #[test]
    fn marginals_and_exchangeability() {
        let alpha = a(&[1.0, 2.0, 0.5]);
        let spec = CopulaSpec::new(alpha.clone(), DegreeSequence::new(vec![0.2, 0.3, 0.5], "")).unwrap();
        let w = sharded(40_000, 9, 8, |rng, buf| {
            let (x, y) = sample_pair(&spec, rng);
            let (x, y) = (x.coords(), y.coords());
            buf.copy_from_slice(&[x[0], x[0] * x[0], y[1], y[1] * y[1], x[0] * y[1], y[0] * x[1], x[2] * y[2] * y[2], y[2] * x[2] * x[2]]);
        });
        let m = |k: Vec<u32>| dirichlet_moment(&alpha, &MultiIndex::new(k));
        for (i, want) in [(0, m(vec![1, 0, 0])), (1, m(vec![2, 0, 0])), (2, m(vec![0, 1, 0])), (3, m(vec![0, 2, 0]))] {
            assert!(w[i].estimate().z_score(want).abs() <= 3.0, "moment {i}");
        }
        // (f(X), g(Y)) and (f(Y), g(X)) have the same law
        for (i, j) in [(4, 5), (6, 7)] {
            let (p, q) = (w[i].estimate(), w[j].estimate());
            let z = (p.mean - q.mean) / (p.se * p.se + q.se * q.se).sqrt();
            assert!(z.abs() <= 3.0, "pair {i},{j}: {z}");
        }
    }

    #[test]
    fn posterior_given_counts() {
        let alpha = a(&[1.0, 1.5]);
        let spec = CopulaSpec::dirac(alpha.clone(), 2);
        let draws = sharded_collect(60_000, 13, |rng| sample_pair_detailed(&spec, rng));
        for l0 in 0..=2u32 {
            let ys: Vec<f64> = draws.iter().filter(|d| d.counts.parts()[0] == l0).map(|d| d.y.coords()[0]).collect();
            let e = jackknife_mean(&ys, 20);
            let want = (1.0 + l0 as f64) / (2.5 + 2.0);
            assert!(e.z_score(want).abs() <= 3.0, "l0={l0}: {e:?}");
        }
    }

    #[test]
    fn spectral_end_to_end() {
        let alpha = a(&[1.0, 2.0, 1.0]);
        let pmf = DegreeSequence::new(vec![0.25; 4], "uniform");
        let rho = pmf_to_jpds(&4.0, &pmf, 3).unwrap();
        let pairs = sample_pairs(&CopulaSpec::new(alpha.clone(), pmf).unwrap(), 40_000, 17);
        for n in 1..=3 {
            let e = estimate_canonical_correlation(&pairs, &alpha, n, Estimator::Kernel).unwrap();
            assert!(e.z_score(rho.get(n)).abs() <= 3.0, "n={n}: {e:?} vs {}", rho.get(n));
        }
    }

    #[test]
    fn deterministic_batches() {
        let spec = CopulaSpec::dirac(a(&[1.0, 1.0]), 2);
        assert_eq!(sample_pairs(&spec, 100, 7), sample_pairs(&spec, 100, 7));
        assert_ne!(sample_pairs(&spec, 100, 7), sample_pairs(&spec, 100, 8));
    }

    #[test]
    fn pd_pairs() {
        let theta = 1.0;
        let indep = PdCopulaSpec::new(theta, crate::pds::dirac_pmf(0), 200).unwrap();
        let pairs = sample_pairs_pd(&indep, 20_000, 2).unwrap();
        assert!(estimate_pd_correlation(&pairs, theta).unwrap().z_score(0.0).abs() <= 3.0);
        let spec = PdCopulaSpec::new(theta, crate::pds::dirac_pmf(2), 200).unwrap();
        let pairs = sample_pairs_pd(&spec, 40_000, 3).unwrap();
        let e = estimate_pd_correlation(&pairs, theta).unwrap();
        assert!(e.z_score(2.0 / 12.0).abs() <= 3.0, "{e:?}");
        let f1 = jackknife_mean(&pairs.iter().map(|(x, _)| x.homozygosity()).collect::<Vec<_>>(), 50);
        assert!(f1.z_score(1.0 / (1.0 + theta)).abs() <= 3.0);
        let g1 = jackknife_mean(&pairs.iter().map(|(_, y)| y.homozygosity()).collect::<Vec<_>>(), 50);
        assert!(g1.z_score(1.0 / (1.0 + theta)).abs() <= 3.0);
    }

    #[test]
    fn pd_matches_large_finite_d() {
        // E[F(X) F(Y)] for the PD sampler against symmetric Dirichlet at d = 200
        let theta = 1.0;
        let pd = PdCopulaSpec::new(theta, crate::pds::dirac_pmf(3), 200).unwrap();
        let pd_pairs = sample_pairs_pd(&pd, 20_000, 21).unwrap();
        let pd_est = jackknife_mean(&pd_pairs.iter().map(|(x, y)| x.homozygosity() * y.homozygosity()).collect::<Vec<_>>(), 50);
        let alpha = DirichletParams::symmetric(&theta, 200).unwrap();
        let spec = CopulaSpec::dirac(alpha, 3);
        let fin = sample_pairs(&spec, 20_000, 22);
        let hom = |p: &SimplexPoint<f64>| p.coords().iter().map(|v| v * v).sum::<f64>();
        let fin_est = jackknife_mean(&fin.iter().map(|(x, y)| hom(x) * hom(y)).collect::<Vec<_>>(), 50);
        let z = (pd_est.mean - fin_est.mean) / (pd_est.se.powi(2) + fin_est.se.powi(2)).sqrt();
        assert!(z.abs() <= 3.0, "{pd_est:?} vs {fin_est:?}");
    }
}
