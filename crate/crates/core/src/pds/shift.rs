use serde::Serialize;

use super::DegreeSequence;
use crate::error::{invalid, Result};
use crate::intrep::check_gasper_region;
use crate::jacobi::zeta;
use crate::numkit::quad::BetaQuadrature;
use crate::numkit::{binomial, Field};

/// `rho_n zeta_n^{alpha+mu, beta-mu} / zeta_n^{alpha, beta}` for `0 <= mu <= beta`.
///
/// `E[R_n^{alpha,beta}(xW)] = (zeta'/zeta) R_n^{alpha+mu,beta-mu}(x)` for
/// `W ~ Beta(alpha, mu)`, so averaging `p_rho(xW, 1)` over `W` produces
/// these coefficients. Positivity survives the shift; values do not.
pub fn shift_parameters<F: Field>(alpha: &F, beta: &F, mu: &F, rho: &DegreeSequence<F>) -> Result<DegreeSequence<F>> {
    if alpha.to_f64() <= 0.0 || beta.to_f64() <= 0.0 {
        return Err(invalid("alpha", "alpha and beta must be positive"));
    }
    if mu.is_negative() || *mu > *beta {
        return Err(invalid("mu", format!("mu = {} is outside [0, beta]", mu.to_f64())));
    }
    let (a2, b2) = (alpha.clone() + mu, beta.clone() - mu);
    let values = rho
        .values()
        .iter()
        .enumerate()
        .map(|(n, r)| r.clone() * zeta(&a2, &b2, n as u32) / zeta(alpha, beta, n as u32))
        .collect();
    Ok(DegreeSequence::new(values, format!("shift(mu={}, {})", mu.to_f64(), rho.provenance())))
}

/// Range of one finite-difference derivative over the `s` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeSign {
    pub order: u32,
    pub min: f64,
    pub max: f64,
    /// Smallest `s` with a negative value.
    pub negative_at: Option<f64>,
}

/// Whether `q(s) = E[exp(-lambda W s)]`, `W ~ Beta(alpha, beta)`, can be a
/// probability generating function on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub nodes: usize,
    /// Change in `q` when the quadrature doubles.
    pub quadrature_error: f64,
    pub step: f64,
    pub derivatives: Vec<DerivativeSign>,
    /// First order whose derivative goes negative, with the point and value.
    pub violation: Option<(u32, f64, f64)>,
    /// Signs alternate with the order, as for a completely monotone `g`.
    pub alternating: bool,
}

impl CounterexampleReport {
    pub fn is_pgf_violated(&self) -> bool {
        self.violation.is_some()
    }
}

const QUAD_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-3;
const S_POINTS: u32 = 100;

/// Mixes `g(x) = exp(-lambda x)` against the extreme points `x -> d(x)` of
/// Gasper's representation with `alpha = beta = theta/2`. A pgf has every
/// derivative nonnegative on `(0, 1)`; the mixture `q` has alternating
/// signs. Derivatives of orders `1..=max_order` come from central
/// differences with step `1e-3`.
pub fn counterexample_check(lambda: f64, theta: f64, max_order: u32) -> Result<CounterexampleReport> {
    if !(lambda > 0.0) {
        return Err(invalid("lambda", "lambda must be positive"));
    }
    if max_order == 0 {
        return Err(invalid("truncation", "need at least one derivative order"));
    }
    let (alpha, beta) = (theta / 2.0, theta / 2.0);
    let region = check_gasper_region(alpha, beta)?;
    if !region.valid() {
        return Err(invalid("theta", format!("alpha = beta = {alpha} is outside the Gasper region ({region})")));
    }
    let q_with = |quad: &BetaQuadrature, s: f64| quad.integrate(|w| (-lambda * w * s).exp());
    let probe = [0.0, 0.5, 1.0, 1.0 + max_order as f64 * FD_STEP];
    let mut nodes = 8;
    let (quad, quadrature_error) = loop {
        let (coarse, fine) = (BetaQuadrature::new(alpha, beta, nodes), BetaQuadrature::new(alpha, beta, 2 * nodes));
        let err = probe.iter().map(|&s| (q_with(&coarse, s) - q_with(&fine, s)).abs()).fold(0.0, f64::max);
        if err <= QUAD_TOL || nodes >= 256 {
            break (fine, err);
        }
        nodes *= 2;
    };
    let q = |s: f64| q_with(&quad, s);
    let mut derivatives = Vec::new();
    for k in 1..=max_order {
        let coef: Vec<f64> = (0..=k).map(|j| f64::from_bigint(&binomial(k, j)) * if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let scale = FD_STEP.powi(k as i32);
        let mut sign = DerivativeSign { order: k, min: f64::INFINITY, max: f64::NEG_INFINITY, negative_at: None };
        for i in 1..S_POINTS {
            let s = i as f64 / S_POINTS as f64;
            let v = coef
                .iter()
                .enumerate()
                .map(|(j, c)| c * q(s + (k as f64 / 2.0 - j as f64) * FD_STEP))
                .sum::<f64>()
                / scale;
            sign.min = sign.min.min(v);
            sign.max = sign.max.max(v);
            if v < 0.0 && sign.negative_at.is_none() {
                sign.negative_at = Some(s);
            }
        }
        derivatives.push(sign);
    }
    let violation = derivatives.iter().find_map(|d| {
        d.negative_at.map(|s| {
            let k = d.order;
            (k, s, (-lambda).powi(k as i32) * quad.integrate(|w| w.powi(k as i32) * (-lambda * w * s).exp()))
        })
    });
    let alternating = derivatives.iter().all(|d| if d.order % 2 == 1 { d.max < 0.0 } else { d.min > 0.0 });
    Ok(CounterexampleReport {
        alpha,
        beta,
        lambda,
        nodes: quad.nodes.len(),
        quadrature_error,
        step: FD_STEP,
        derivatives,
        violation,
        alternating,
    })
}
