//! Positive-definite sequences.
//!
//! A sequence `rho` is a Jacobi PDS (JPDS) for `D_alpha` when
//! `p(x, y) = sum_n rho_n Q_n(x, y) >= 0` on the simplex, and a Hahn PDS
//! (HPDS) for `DM_alpha(.; N)` when `sum_n rho_n H_n(r, s) >= 0` on the
//! discrete simplex. Such sequences are exactly the canonical correlations
//! of exchangeable pairs with the given marginals.
//!
//! Grid scans of `p` are evidence, not proof: the verdict is at best
//! [`Verdict::PositiveOnGrid`]. Exact HPDS scans are exhaustive and end in
//! a certificate.

mod scan;
mod shift;
mod transform;

pub use scan::{p_rho, scan_hpds, scan_jpds, PartialSum, DEFAULT_RESOLUTION};
pub use shift::{counterexample_check, shift_parameters, CounterexampleReport, DerivativeSign};
pub use transform::{
    bernstein_approx, coalescent_pmf, dirac_pmf, jpds_to_hpds, jpds_to_pmf, mixture_density, pmf_by_derivatives,
    pmf_to_jpds, truncated_pmf_pds, PmfInversion, TruncatedPmfReport,
};

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numkit::{falling, rising, Field, Flavor, Scalar};

/// `rho_0, rho_1, ...` (or a pmf `d_0, d_1, ...`) with a note on where it
/// came from. Entries past the end are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence<F> {
    values: Vec<F>,
    provenance: String,
    tail_bound: Option<f64>,
}

impl<F: Field> DegreeSequence<F> {
    pub fn new(values: Vec<F>, provenance: impl Into<String>) -> Self {
        DegreeSequence { values, provenance: provenance.into(), tail_bound: None }
    }

    /// Records a bound on the mass or magnitude dropped by truncation.
    pub fn with_tail_bound(mut self, bound: f64) -> Self {
        self.tail_bound = Some(bound);
        self
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn get(&self, n: u32) -> F {
        self.values.get(n as usize).cloned().unwrap_or_else(F::zero)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest stored degree (0 for an empty sequence).
    pub fn max_degree(&self) -> u32 {
        self.values.len().saturating_sub(1) as u32
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    pub fn flavor(&self) -> Flavor {
        self.values.first().map_or(Flavor::Exact, |v| v.flavor())
    }

    /// `rho_0 = 1`, required of every PDS candidate.
    pub fn is_normalized(&self) -> bool {
        self.values.first().is_some_and(|v| *v == F::one())
    }

    /// Termwise product, which preserves both JPDS and HPDS.
    pub fn product(&self, other: &DegreeSequence<F>) -> DegreeSequence<F> {
        let len = self.len().min(other.len());
        DegreeSequence::new(
            (0..len).map(|n| self.values[n].clone() * &other.values[n]).collect(),
            format!("({}) * ({})", self.provenance, other.provenance),
        )
    }

    pub fn truncated(&self, max_degree: u32) -> DegreeSequence<F> {
        let mut out = self.clone();
        out.values.truncate(max_degree as usize + 1);
        out
    }

    pub fn to_f64(&self) -> DegreeSequence<f64> {
        DegreeSequence {
            values: self.values.iter().map(Field::to_f64).collect(),
            provenance: self.provenance.clone(),
            tail_bound: self.tail_bound,
        }
    }

    pub fn to_scalars(&self) -> DegreeSequence<Scalar> {
        DegreeSequence {
            values: self.values.iter().map(Field::to_scalar).collect(),
            provenance: self.provenance.clone(),
            tail_bound: self.tail_bound,
        }
    }

    /// Checks that the entries form a pmf: nonnegative and summing to one,
    /// exactly or within `1e-12`.
    pub fn check_pmf(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(crate::Error::InvalidPmf("empty pmf".into()));
        }
        if let Some(m) = self.values.iter().position(|v| v.is_negative()) {
            return Err(crate::Error::InvalidPmf(format!("d_{m} = {} is negative", self.values[m].to_f64())));
        }
        let total = self.values.iter().fold(F::zero(), |s, v| s + v);
        let ok = match total.flavor() {
            Flavor::Exact => total == F::one(),
            Flavor::Float => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(crate::Error::InvalidPmf(format!("total mass {} is not 1", total.to_f64())));
        }
        Ok(())
    }
}

/// Serialized form: a flavor tag, the provenance and the values, with
/// rationals as `"p/q"` strings.
impl<F: Field> Serialize for DegreeSequence<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DegreeSequence", 4)?;
        st.serialize_field("flavor", &self.flavor())?;
        st.serialize_field("provenance", &self.provenance)?;
        st.serialize_field("values", &self.values.iter().map(Field::to_scalar).collect::<Vec<_>>())?;
        st.serialize_field("tail_bound", &self.tail_bound)?;
        st.end()
    }
}

/// `rho_n = m_[n] / (theta+m)_(n)`, the image of the point mass at `m`.
/// Also an HPDS for every `N >= m`.
pub fn dirac_sequence<F: Field>(theta: &F, m: u32, nmax: u32) -> DegreeSequence<F> {
    let mf = F::from_i64(m as i64);
    let shifted = theta.clone() + &mf;
    DegreeSequence::new(
        (0..=nmax).map(|n| falling(&mf, n) / rising(&shifted, n)).collect(),
        format!("dirac(m={m})"),
    )
}

/// `m_[n] / (theta+m)_(n) * (theta+N)_(n) / N_[n]` for `n <= N`: the
/// coefficients of `chi^H_m` in the Hahn kernels, an HPDS for `m <= N`.
pub fn chi_sequence<F: Field>(theta: &F, m: u32, size: u32) -> Result<DegreeSequence<F>> {
    if m > size {
        return Err(invalid("m", format!("m = {m} exceeds N = {size}")));
    }
    let big = F::from_i64(size as i64);
    let top = theta.clone() + &big;
    let base = dirac_sequence(theta, m, size);
    let values = base
        .values
        .into_iter()
        .enumerate()
        .map(|(n, v)| v * rising(&top, n as u32) / falling(&big, n as u32))
        .collect();
    Ok(DegreeSequence::new(values, format!("chi(m={m}, N={size})")))
}

/// Wright-Fisher eigenvalues `exp(-n(n+theta-1)t/2)`.
pub fn wf_sequence(theta: f64, t: f64, nmax: u32) -> Result<DegreeSequence<f64>> {
    if !(theta > 0.0) || !(t >= 0.0) {
        return Err(invalid("theta", "need theta > 0 and t >= 0"));
    }
    Ok(DegreeSequence::new(
        (0..=nmax)
            .map(|n| {
                let n = n as f64;
                (-0.5 * n * (n + theta - 1.0) * t).exp()
            })
            .collect(),
        format!("wright-fisher(theta={theta}, t={t})"),
    ))
}

/// The Poisson-kernel sequence `z^n`.
pub fn poisson_sequence<F: Field>(z: &F, nmax: u32) -> DegreeSequence<F> {
    DegreeSequence::new((0..=nmax).map(|n| z.powi(n)).collect(), format!("poisson(z={})", z.to_f64()))
}

/// Outcome of a positivity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Exhaustive and exact: a proof.
    CertifiedPositive,
    /// Nonnegative at every evaluated point, short of a proof.
    PositiveOnGrid,
    Violated,
    /// No violation seen, but the truncation tail is as large as the margin.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedPositive => "certified-positive",
            Verdict::PositiveOnGrid => "positive-on-grid",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A point pair where the series is negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: Vec<Scalar>,
    pub y: Vec<Scalar>,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    verdict: Verdict,
    witness: Option<Witness>,
    truncation: u32,
    tail_bound: Option<f64>,
    points: usize,
    min_value: f64,
}

impl PositivityReport {
    pub(crate) fn violated(witness: Witness, truncation: u32, tail_bound: Option<f64>, points: usize) -> Self {
        let min_value = witness.value.to_f64();
        PositivityReport { verdict: Verdict::Violated, witness: Some(witness), truncation, tail_bound, points, min_value }
    }

    pub(crate) fn clean(verdict: Verdict, truncation: u32, tail_bound: Option<f64>, points: usize, min_value: f64) -> Self {
        debug_assert!(verdict != Verdict::Violated);
        PositivityReport { verdict, witness: None, truncation, tail_bound, points, min_value }
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    /// Present exactly when the verdict is [`Verdict::Violated`].
    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    /// Number of points (or point pairs) evaluated.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.verdict, Verdict::CertifiedPositive | Verdict::PositiveOnGrid)
    }
}
