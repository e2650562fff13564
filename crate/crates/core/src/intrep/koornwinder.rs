//! Koornwinder's product formula for Jacobi polynomials on `[0, 1]`:
//! `R_n(x) R_n(y) = E[R_n(Z)]` with `Z = phi(x, y; U, C)`.

use std::fmt;

use crate::dist::{sample_beta, RngStream};
use crate::error::{invalid, Error, Result};
use crate::jacobi::{r_values_f64, zeta_f64};

/// Which clauses of the product-formula region `beta >= alpha` and
/// (`alpha >= 1/2` or `alpha + beta >= 2`) hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GasperVerdict {
    pub ordered: bool,
    pub half: bool,
    pub sum_two: bool,
}

impl GasperVerdict {
    pub fn valid(&self) -> bool {
        self.ordered && (self.half || self.sum_two)
    }
}

impl fmt::Display for GasperVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "holds" } else { "fails" };
        write!(
            f,
            "{}: beta >= alpha {}, alpha >= 1/2 {}, alpha + beta >= 2 {}",
            if self.valid() { "valid" } else { "invalid" },
            mark(self.ordered),
            mark(self.half),
            mark(self.sum_two)
        )
    }
}

/// The region where the product formula has a positive measure.
pub fn check_gasper_region(alpha: f64, beta: f64) -> Result<GasperVerdict> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(invalid("alpha", "alpha and beta must be positive"));
    }
    Ok(GasperVerdict { ordered: beta >= alpha, half: alpha >= 0.5, sum_two: alpha + beta >= 2.0 })
}

/// Sampler for the explicit measure, valid for `alpha >= 1/2`, `beta >= alpha`.
///
/// `U^2 ~ Beta(alpha, beta - alpha)` (`U = 1` when `beta = alpha`) and
/// `C = 2 Beta(alpha - 1/2, alpha - 1/2) - 1` (a fair sign at `alpha = 1/2`);
/// then `Z = xy + U^2 (1-x)(1-y) + 2 U C sqrt(x(1-x) y(1-y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KoornwinderSampler {
    alpha: f64,
    beta: f64,
}

impl KoornwinderSampler {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let v = check_gasper_region(alpha, beta)?;
        if !v.ordered || !v.half {
            return Err(Error::RegionViolation {
                stage: 1,
                reason: format!("explicit sampler needs beta >= alpha >= 1/2, got alpha={alpha}, beta={beta}"),
            });
        }
        Ok(KoornwinderSampler { alpha, beta })
    }

    pub fn sample(&self, x: f64, y: f64, rng: &mut RngStream) -> f64 {
        let t = if self.beta > self.alpha { sample_beta(self.alpha, self.beta - self.alpha, rng) } else { 1.0 };
        let c = if self.alpha > 0.5 {
            2.0 * sample_beta(self.alpha - 0.5, self.alpha - 0.5, rng) - 1.0
        } else if rng.open01() < 0.5 {
            -1.0
        } else {
            1.0
        };
        let cross = (x * (1.0 - x) * y * (1.0 - y)).max(0.0).sqrt();
        (x * y + t * (1.0 - x) * (1.0 - y) + 2.0 * t.sqrt() * c * cross).clamp(0.0, 1.0)
    }
}

pub fn sample_koornwinder(alpha: f64, beta: f64, x: f64, y: f64, rng: &mut RngStream) -> Result<f64> {
    for (name, v) in [("x", x), ("y", y)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(invalid(name, format!("{v} is outside [0, 1]")));
        }
    }
    Ok(KoornwinderSampler::new(alpha, beta)?.sample(x, y, rng))
}

/// Partial sum of `K(x, y, z) = sum_n zeta_n R_n(x) R_n(y) R_n(z)`, the
/// density of the product-formula measure against `Beta(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    /// `|zeta_T R_T(x) R_T(y) R_T(z)|`, a convergence diagnostic.
    pub last_term: f64,
}

pub fn density_k(alpha: f64, beta: f64, x: f64, y: f64, z: f64, truncation: u32) -> Result<DensityValue> {
    check_gasper_region(alpha, beta)?;
    let (rx, ry, rz) = (
        r_values_f64(alpha, beta, truncation, x),
        r_values_f64(alpha, beta, truncation, y),
        r_values_f64(alpha, beta, truncation, z),
    );
    let mut value = 0.0;
    let mut last = 0.0;
    for n in 0..=truncation as usize {
        last = zeta_f64(alpha, beta, n as u32) * (rx[n] * ry[n]) * rz[n];
        value += last;
    }
    Ok(DensityValue { value, last_term: last.abs() })
}
