//! Streaming Monte Carlo estimators.

use serde::{Deserialize, Serialize};

/// Welford mean/variance accumulator. Accumulators merge exactly
/// (Chan et al.), so sharded runs reduce deterministically when merged in
/// shard order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean,
            se: (self.variance() / self.n.max(1) as f64).sqrt(),
            n: self.n,
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub n: u64,
}

impl Estimate {
    /// `(mean - target) / se`. A zero standard error gives 0 on an exact
    /// hit and an infinite score otherwise.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.mean - target;
        if self.se > 0.0 {
            diff / self.se
        } else if diff.abs() <= 1e-12 * target.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        }
    }
}

/// Delete-a-group jackknife for the mean of `values`, with the data cut
/// into `groups` contiguous blocks.
pub fn jackknife_mean(values: &[f64], groups: usize) -> Estimate {
    let n = values.len();
    let g = groups.clamp(1, n.max(1));
    let total: f64 = values.iter().sum();
    let mean = if n > 0 { total / n as f64 } else { f64::NAN };
    if g < 2 {
        return Estimate { mean, se: f64::NAN, n: n as u64 };
    }
    let mut leave_out = Vec::with_capacity(g);
    for k in 0..g {
        let (lo, hi) = (k * n / g, (k + 1) * n / g);
        let block: f64 = values[lo..hi].iter().sum();
        leave_out.push((total - block) / (n - (hi - lo)) as f64);
    }
    let avg = leave_out.iter().sum::<f64>() / g as f64;
    let var = leave_out.iter().map(|v| (v - avg).powi(2)).sum::<f64>() * (g - 1) as f64 / g as f64;
    Estimate { mean, se: var.sqrt(), n: n as u64 }
}
