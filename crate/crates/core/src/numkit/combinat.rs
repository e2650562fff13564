//! Factorial symbols, multinomials and the two enumerations every kernel
//! sum runs over: compositions (multi-indices of fixed total) and integer
//! partitions in multiplicity form.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::scalar::Field;

/// Rising factorial `a (a+1) ... (a+x-1)`; 1 when `x = 0`.
pub fn rising<F: Field>(a: &F, x: u32) -> F {
    let mut acc = F::one();
    let mut t = a.clone();
    for _ in 0..x {
        acc = acc * &t;
        t = t + F::one();
    }
    acc
}

/// Falling factorial `a (a-1) ... (a-x+1)`; 1 when `x = 0`.
pub fn falling<F: Field>(a: &F, x: u32) -> F {
    let mut acc = F::one();
    let mut t = a.clone();
    for _ in 0..x {
        acc = acc * &t;
        t = t - F::one();
    }
    acc
}

/// `rising(a, x)` for `x >= -1` using the Gamma-ratio convention
/// `(a)_(-1) = 1/(a-1)`.
pub fn rising_ext<F: Field>(a: &F, x: i64) -> F {
    if x >= 0 {
        rising(a, x as u32)
    } else {
        assert_eq!(x, -1, "only (a)_(-1) is supported");
        (a.clone() - F::one()).recip()
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A multi-index `n = (n_1, ..., n_d)` with its total `|n|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    parts: Vec<u32>,
    total: u32,
}

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        let total = parts.iter().sum();
        MultiIndex { parts, total }
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex::new(vec![0; d])
    }

    pub fn unit(d: usize, i: usize, n: u32) -> Self {
        let mut parts = vec![0; d];
        parts[i] = n;
        MultiIndex::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn dim(&self) -> usize {
        self.parts.len()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::new(
            self.parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// The partition obtained by ranking the parts.
    pub fn profile(&self) -> PartitionProfile {
        PartitionProfile::from_parts(self.parts.clone())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(parts: Vec<u32>) -> Self {
        MultiIndex::new(parts)
    }
}

/// `|n|! / prod n_i!`.
pub fn multinomial(m: &MultiIndex) -> BigInt {
    let mut acc = BigInt::one();
    let mut running = 0u32;
    for &p in m.parts() {
        running += p;
        acc *= binomial(running, p);
    }
    acc
}

/// Every composition of `total` into `d` nonnegative parts, in
/// lexicographic order. The count is `C(total+d-1, d-1)`.
pub fn compositions(d: usize, total: u32) -> Compositions {
    assert!(d >= 1, "compositions need d >= 1");
    let mut first = vec![0; d];
    first[d - 1] = total;
    Compositions {
        next: Some(first),
        total,
    }
}

/// Lexicographic composition iterator. The successor of `c` increments the
/// rightmost position `i < d-1` that still has mass to its right and pushes
/// the remaining mass to the last slot.
pub struct Compositions {
    next: Option<Vec<u32>>,
    total: u32,
}

impl Iterator for Compositions {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.next.take()?;
        let d = cur.len();
        let mut succ = cur.clone();
        let mut found = false;
        for i in (0..d.saturating_sub(1)).rev() {
            let right: u32 = succ[i + 1..].iter().sum();
            if right > 0 {
                succ[i] += 1;
                let used: u32 = succ[..=i].iter().sum();
                for v in succ[i + 1..].iter_mut() {
                    *v = 0;
                }
                succ[d - 1] = self.total - used;
                found = true;
                break;
            }
        }
        if found {
            self.next = Some(succ);
        }
        Some(MultiIndex::new(cur))
    }
}

/// An integer partition stored both as ranked parts and as multiplicities
/// `beta[j]` = number of parts equal to `j` (index 0 unused).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionProfile {
    parts: Vec<u32>,
    beta: Vec<u32>,
}

impl PartitionProfile {
    /// Ranks any list of nonnegative parts; zeros are dropped.
    pub fn from_parts(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let max = parts.first().copied().unwrap_or(0) as usize;
        let mut beta = vec![0; max + 1];
        for &p in &parts {
            beta[p as usize] += 1;
        }
        PartitionProfile { parts, beta }
    }

    pub fn empty() -> Self {
        PartitionProfile::from_parts(Vec::new())
    }

    /// Weakly decreasing positive parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `beta()[j]` is the multiplicity of part `j`; index 0 is always 0.
    pub fn beta(&self) -> &[u32] {
        &self.beta
    }

    pub fn multiplicity(&self, j: u32) -> u32 {
        self.beta.get(j as usize).copied().unwrap_or(0)
    }

    /// Number of positive parts.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `prod_j beta_j!`.
    pub fn beta_factorial(&self) -> BigInt {
        self.beta.iter().map(|&b| factorial(b)).product()
    }

    /// Distinct part sizes with their multiplicities, largest first.
    pub fn blocks(&self) -> Vec<(u32, u32)> {
        (1..self.beta.len())
            .rev()
            .filter(|&j| self.beta[j] > 0)
            .map(|j| (j as u32, self.beta[j]))
            .collect()
    }

    /// The ranked parts padded with zeros to length `d`.
    pub fn padded(&self, d: usize) -> MultiIndex {
        let mut v = self.parts.clone();
        v.resize(d.max(v.len()), 0);
        MultiIndex::new(v)
    }
}

/// Every partition of `total` into at most `max_parts` parts, each once.
/// Order: reverse lexicographic on the ranked parts, starting at `{total}`.
pub fn partitions(total: u32, max_parts: usize) -> Vec<PartitionProfile> {
    fn rec(rest: u32, cap: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<PartitionProfile>) {
        if rest == 0 {
            out.push(PartitionProfile::from_parts(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, max_parts, &mut Vec::new(), &mut out);
    out
}
