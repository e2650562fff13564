//! Gauss-Jacobi quadrature for Beta laws on `[0, 1]` (Golub-Welsch).

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and probability weights integrating polynomials of degree
/// `< 2n` exactly against `Beta(a, b)`.
#[derive(Debug, Clone)]
pub struct BetaQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl BetaQuadrature {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        assert!(a > 0.0 && b > 0.0 && n >= 1);
        // weight (1-t)^p (1+t)^q on [-1, 1] with x = (1+t)/2
        let p = b - 1.0;
        let q = a - 1.0;
        let s = p + q;
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let diag = if k == 0 {
                (q - p) / (s + 2.0)
            } else {
                (q * q - p * p) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
            };
            jm[(k, k)] = diag;
            if k + 1 < n {
                let j = kf + 1.0;
                let b2 = if k == 0 {
                    4.0 * (1.0 + p) * (1.0 + q) / ((2.0 + s).powi(2) * (3.0 + s))
                } else {
                    4.0 * j * (j + p) * (j + q) * (j + s)
                        / ((2.0 * j + s).powi(2) * (2.0 * j + s + 1.0) * (2.0 * j + s - 1.0))
                };
                let off = b2.sqrt();
                jm[(k, k + 1)] = off;
                jm[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(jm);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                ((1.0 + eig.eigenvalues[i]) / 2.0, v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        BetaQuadrature {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
