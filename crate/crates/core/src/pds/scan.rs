use std::collections::HashSet;

use rayon::prelude::*;

use super::{DegreeSequence, PositivityReport, Verdict, Witness};
use crate::dist::{DirichletParams, SimplexPoint};
use crate::error::{Error, Result};
use crate::hahn::{h_kernels, u_norm, univariate_hahn, HahnContext};
use crate::jacobi::{q_kernels, KernelTable};
use crate::numkit::mc::install;
use crate::numkit::{compositions, Field, Flavor, MultiIndex, Scalar};

/// Lattice steps per coordinate in the default JPDS grid.
pub const DEFAULT_RESOLUTION: u32 = 20;

/// Relative slack for float sign tests.
const SIGN_TOL: f64 = 1e-9;

/// A truncated series value with the magnitude of its last term.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSum<F> {
    pub value: F,
    pub last_term: F,
}

/// `sum_{n <= truncation} rho_n Q_n(x, y)`.
///
/// Exact inputs go through the `xi` expansion; float inputs use the
/// orthonormal product basis, which stays accurate at high degree.
pub fn p_rho<F: Field>(
    alpha: &DirichletParams<F>,
    rho: &DegreeSequence<F>,
    x: &SimplexPoint<F>,
    y: &SimplexPoint<F>,
    truncation: u32,
) -> Result<PartialSum<F>> {
    if truncation > rho.max_degree() {
        return Err(Error::DegreeOutOfRange { n: truncation, bound: rho.max_degree() });
    }
    let kernels: Vec<F> = match alpha.total().flavor() {
        Flavor::Exact => q_kernels(alpha, truncation, x, y)?,
        Flavor::Float => {
            alpha.check_dim(x.dim())?;
            alpha.check_dim(y.dim())?;
            let table = KernelTable::new(&alpha.to_f64(), truncation)?;
            table
                .kernels(&x.to_f64().coords().to_vec(), &y.to_f64().coords().to_vec())
                .into_iter()
                .map(F::from_f64)
                .collect()
        }
    };
    let terms: Vec<F> = kernels.into_iter().enumerate().map(|(n, k)| rho.get(n as u32) * k).collect();
    let last_term = terms.last().expect("degree 0 present").abs();
    Ok(PartialSum { value: terms.into_iter().fold(F::zero(), |s, t| s + t), last_term })
}

/// Vertices, edge midpoints, then the barycentric lattice with step
/// `1/resolution`, without repeats.
fn grid_points(d: usize, resolution: u32) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    for i in 0..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        pts.push(v);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut v = vec![0.0; d];
            v[i] = 0.5;
            v[j] = 0.5;
            pts.push(v);
        }
    }
    let step = resolution.max(1);
    for k in compositions(d, step) {
        pts.push(k.parts().iter().map(|&c| c as f64 / step as f64).collect());
    }
    let mut seen = HashSet::new();
    pts.retain(|p| seen.insert(p.iter().map(|v| v.to_bits()).collect::<Vec<_>>()));
    pts
}

struct RowScan {
    /// Most negative violating value with its column.
    worst: Option<(f64, usize)>,
    min: f64,
    last: f64,
}

/// Evaluates `p_rho` on all pairs of grid points (the series is symmetric,
/// so only `i <= j`). The witness is the most negative pair, earliest in
/// grid order on ties.
pub fn scan_jpds(
    alpha: &DirichletParams<f64>,
    rho: &DegreeSequence<f64>,
    resolution: u32,
    truncation: u32,
) -> Result<PositivityReport> {
    if truncation > rho.max_degree() {
        return Err(Error::DegreeOutOfRange { n: truncation, bound: rho.max_degree() });
    }
    let table = KernelTable::new(alpha, truncation)?;
    let pts = grid_points(alpha.dim(), resolution);
    // a finite sequence scanned in full has no tail
    let has_tail = rho.max_degree() > truncation;
    let rho: Vec<f64> = (0..=truncation).map(|n| rho.get(n)).collect();
    let rows: Vec<RowScan> = install(|| {
        let vals: Vec<Vec<Vec<f64>>> = pts.par_iter().map(|p| table.orthonormal_values(p)).collect();
        (0..pts.len())
            .into_par_iter()
            .map(|i| {
                let mut row = RowScan { worst: None, min: f64::INFINITY, last: 0.0 };
                for j in i..pts.len() {
                    let k = KernelTable::kernels_from(&vals[i], &vals[j]);
                    let (mut value, mut mass) = (0.0, 0.0);
                    for (r, kn) in rho.iter().zip(&k) {
                        value += r * kn;
                        mass += (r * kn).abs();
                    }
                    row.last = row.last.max((rho[truncation as usize] * k[truncation as usize]).abs());
                    row.min = row.min.min(value);
                    if value < -SIGN_TOL * (1.0 + mass) && row.worst.is_none_or(|(w, _)| value < w) {
                        row.worst = Some((value, j));
                    }
                }
                row
            })
            .collect()
    });
    let pairs = pts.len() * (pts.len() + 1) / 2;
    let tail = if has_tail {
        rows.iter().map(|r| r.last).fold(0.0, f64::max)
    } else {
        0.0
    };
    let mut worst: Option<(f64, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Some((v, j)) = row.worst {
            if worst.is_none_or(|(w, _, _)| v < w) {
                worst = Some((v, i, j));
            }
        }
    }
    let min = rows.iter().map(|r| r.min).fold(f64::INFINITY, f64::min);
    Ok(match worst {
        Some((v, i, j)) => {
            let pt = |k: usize| pts[k].iter().map(|&c| Scalar::Float(c)).collect();
            PositivityReport::violated(Witness { x: pt(i), y: pt(j), value: Scalar::Float(v) }, truncation, Some(tail), pairs)
        }
        None if min < tail => PositivityReport::clean(Verdict::Inconclusive, truncation, Some(tail), pairs, min),
        None => PositivityReport::clean(Verdict::PositiveOnGrid, truncation, Some(tail), pairs, min),
    })
}

/// `h_n(r; N)` for `n <= nmax`, `r <= N`, with the norms `u_n`.
pub(crate) fn hahn_table<F: Field>(a: &F, b: &F, size: u32, nmax: u32) -> Result<(Vec<Vec<F>>, Vec<F>)> {
    let table = install(|| {
        (0..=nmax)
            .into_par_iter()
            .map(|n| (0..=size).map(|r| univariate_hahn(a, b, n, r, size)).collect::<Result<Vec<F>>>())
            .collect::<Result<Vec<_>>>()
    })?;
    let norms = (0..=nmax).map(|n| u_norm(a, b, size, n)).collect::<Result<Vec<F>>>()?;
    Ok((table, norms))
}

/// Exhaustive evaluation of `sum_n rho_n H_n(r, s)` over all pairs with
/// `|r| = |s| = N`. With exact arithmetic a positive verdict is a proof.
/// For `d = 2` the kernel factors as `u_n h_n(r_1) h_n(s_1)`.
pub fn scan_hpds<F: Field>(alpha: &DirichletParams<F>, size: u32, rho: &DegreeSequence<F>) -> Result<PositivityReport> {
    let truncation = rho.max_degree().min(size);
    let exact = alpha.total().flavor() == Flavor::Exact;
    let d = alpha.dim();
    let comps: Vec<MultiIndex> = compositions(d, size).collect();
    let rho_v: Vec<F> = (0..=truncation).map(|n| rho.get(n)).collect();
    // value(i, j) for i <= j; returns (value, sum of |terms|)
    let rows: Vec<Result<Option<(F, usize)>>> = if d == 2 {
        let (a, b) = (alpha.alpha()[0].clone(), alpha.alpha()[1].clone());
        let (h, u) = hahn_table(&a, &b, size, truncation)?;
        let w: Vec<F> = rho_v.iter().zip(&u).map(|(r, u)| r.clone() * u).collect();
        install(|| {
            (0..comps.len())
                .into_par_iter()
                .map(|i| {
                    let ri = comps[i].parts()[0] as usize;
                    let mut worst: Option<(F, usize)> = None;
                    for (j, c) in comps.iter().enumerate().skip(i) {
                        let sj = c.parts()[0] as usize;
                        let (mut value, mut mass) = (F::zero(), 0.0);
                        for (n, wn) in w.iter().enumerate() {
                            let t = wn.clone() * &h[n][ri] * &h[n][sj];
                            mass += t.to_f64().abs();
                            value = value + t;
                        }
                        note(&mut worst, value, mass, j, exact);
                    }
                    Ok(worst)
                })
                .collect()
        })
    } else {
        let ctx = HahnContext::new(alpha.clone(), size);
        install(|| {
            (0..comps.len())
                .into_par_iter()
                .map(|i| {
                    let mut worst: Option<(F, usize)> = None;
                    for j in i..comps.len() {
                        let ks = h_kernels(&ctx, truncation, &comps[i], &comps[j])?;
                        let (mut value, mut mass) = (F::zero(), 0.0);
                        for (r, k) in rho_v.iter().zip(ks) {
                            let t = r.clone() * k;
                            mass += t.to_f64().abs();
                            value = value + t;
                        }
                        note(&mut worst, value, mass, j, exact);
                    }
                    Ok(worst)
                })
                .collect()
        })
    };
    let pairs = comps.len() * (comps.len() + 1) / 2;
    let mut worst: Option<(F, usize, usize)> = None;
    for (i, row) in rows.into_iter().enumerate() {
        if let Some((v, j)) = row? {
            if worst.as_ref().is_none_or(|(w, _, _)| v < *w) {
                worst = Some((v, i, j));
            }
        }
    }
    let counts = |k: usize| comps[k].parts().iter().map(|&c| F::from_i64(c as i64).to_scalar()).collect();
    Ok(match worst {
        Some((v, i, j)) => PositivityReport::violated(Witness { x: counts(i), y: counts(j), value: v.to_scalar() }, truncation, None, pairs),
        None => {
            let verdict = if exact { Verdict::CertifiedPositive } else { Verdict::PositiveOnGrid };
            PositivityReport::clean(verdict, truncation, None, pairs, f64::NAN)
        }
    })
}

fn note<F: Field>(worst: &mut Option<(F, usize)>, value: F, mass: f64, j: usize, exact: bool) {
    let bad = if exact { value.is_negative() } else { value.to_f64() < -SIGN_TOL * (1.0 + mass) };
    if bad && worst.as_ref().is_none_or(|(w, _)| value < *w) {
        *worst = Some((value, j));
    }
}
