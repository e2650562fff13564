use crate::error::{invalid, Result};
use crate::numkit::{factorial_f, falling, rising, Field};

/// `a^theta_{nm} = (theta+2n-1) (-1)^{n-m} (theta+m)_(n-1) / (m! (n-m)!)`,
/// with `a_00 = 1`.
pub fn coeff_a<F: Field>(theta: &F, n: u32, m: u32) -> Result<F> {
    if *theta <= F::zero() {
        return Err(invalid("theta", "total parameter must be positive"));
    }
    if m > n {
        return Err(invalid("m", format!("m = {m} exceeds n = {n}")));
    }
    Ok(coeff_a_unchecked(theta, n, m))
}

/// `coeff_a` for any `theta`, including the negative totals of
/// hypergeometric kernels. Requires `m <= n`.
pub(crate) fn coeff_a_unchecked<F: Field>(theta: &F, n: u32, m: u32) -> F {
    if n == 0 {
        return F::one();
    }
    let sign = if (n - m) % 2 == 0 { F::one() } else { -F::one() };
    let lead = theta.clone() + F::from_i64(2 * n as i64 - 1);
    let poch = rising(&(theta.clone() + F::from_i64(m as i64)), n - 1);
    sign * lead * poch / (factorial_f::<F>(m) * factorial_f::<F>(n - m))
}

/// `c^theta_{mn} = m_[n] / (theta+m)_(n)`, the inverse triangle.
pub fn coeff_c<F: Field>(theta: &F, m: u32, n: u32) -> Result<F> {
    if *theta <= F::zero() {
        return Err(invalid("theta", "total parameter must be positive"));
    }
    if n > m {
        return Ok(F::zero());
    }
    let mf = F::from_i64(m as i64);
    Ok(falling(&mf, n) / rising(&(theta.clone() + mf), n))
}

/// Lower-triangular coefficient table `T[n][m]`, `m <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTriangle<F> {
    theta: F,
    rows: Vec<Vec<F>>,
}

impl<F: Field> CoeffTriangle<F> {
    /// The `a` system through degree `max`.
    pub fn a(theta: &F, max: u32) -> Result<Self> {
        let rows = (0..=max)
            .map(|n| (0..=n).map(|m| coeff_a(theta, n, m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CoeffTriangle { theta: theta.clone(), rows })
    }

    /// The `c` system through degree `max`, stored with rows indexed by `m`.
    pub fn c(theta: &F, max: u32) -> Result<Self> {
        let rows = (0..=max)
            .map(|m| (0..=m).map(|n| coeff_c(theta, m, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CoeffTriangle { theta: theta.clone(), rows })
    }

    pub fn from_rows(theta: F, rows: Vec<Vec<F>>) -> Self {
        CoeffTriangle { theta, rows }
    }

    pub fn theta(&self) -> &F {
        &self.theta
    }

    pub fn max_degree(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn get(&self, n: u32, m: u32) -> F {
        if m > n {
            return F::zero();
        }
        self.rows[n as usize][m as usize].clone()
    }

    pub fn row(&self, n: u32) -> &[F] {
        &self.rows[n as usize]
    }

    /// `sum_m T[n][m] v[m]`.
    pub fn row_dot(&self, n: u32, v: &[F]) -> F {
        self.rows[n as usize]
            .iter()
            .zip(v)
            .fold(F::zero(), |s, (t, x)| s + t.clone() * x)
    }

    /// `out[n] = sum_{m<=n} T[n][m] v[m]` for every row.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        (0..self.rows.len().min(v.len()))
            .map(|n| self.row_dot(n as u32, v))
            .collect()
    }

    /// Lower-triangular product `self * other`.
    pub fn mul(&self, other: &CoeffTriangle<F>) -> CoeffTriangle<F> {
        let max = self.max_degree().min(other.max_degree());
        let rows = (0..=max)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        (k..=n).fold(F::zero(), |s, m| s + self.get(n, m) * other.get(m, k))
                    })
                    .collect()
            })
            .collect();
        CoeffTriangle { theta: self.theta.clone(), rows }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(n, row)| {
            row.iter()
                .enumerate()
                .all(|(m, v)| if m == n { *v == F::one() } else { v.is_zero() })
        })
    }
}
