//! Sparse multivariate polynomials with exact or floating coefficients.
//!
//! Only what the identity oracles need: ring operations, evaluation,
//! variable substitution and expectations under products of Dirichlet laws
//! (each monomial integrates to a ratio of rising factorials).

use std::collections::BTreeMap;

use super::dirichlet_moment_raw;
use super::scalar::Field;

/// Exponent vector to coefficient. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, F::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: F) -> Self {
        let mut p = Poly::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: F) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exponents) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exponents, s);
                }
            }
            None => {
                self.terms.insert(exponents, c);
            }
        }
    }

    pub fn add(&self, other: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly<F>) -> Poly<F> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly<F>) -> Poly<F> {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly<F> {
        let mut acc = Poly::constant(self.nvars, F::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[F]) -> F {
        let mut s = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t * xi.powi(k);
                }
            }
            s = s + t;
        }
        s
    }

    /// Places this polynomial's variables at positions `map[i]` of a ring
    /// with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly<F> {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Substitutes polynomial `subs[i]` for variable `i`.
    pub fn compose(&self, subs: &[Poly<F>]) -> Poly<F> {
        let nv = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&subs[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Expectation when consecutive variable blocks are independent
    /// Dirichlet vectors with the given parameters.
    pub fn expect_dirichlet(&self, blocks: &[&[F]]) -> F {
        let totals: Vec<F> = blocks
            .iter()
            .map(|b| b.iter().fold(F::zero(), |s, a| s + a))
            .collect();
        debug_assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), self.nvars);
        let mut s = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut off = 0;
            for (b, tot) in blocks.iter().zip(&totals) {
                t = t * dirichlet_moment_raw(b, tot, &e[off..off + b.len()]);
                off += b.len();
            }
            s = s + t;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::scalar::{q, Rational};

    #[test]
    fn ring_and_eval() {
        let x: Poly<Rational> = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).pow(2).sub(&x.mul(&y).scale(&q(2, 1)));
        // (x+y)^2 - 2xy = x^2 + y^2
        assert_eq!(p.eval(&[q(1, 2), q(1, 3)]), q(13, 36));
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn uniform_second_moment() {
        let x: Poly<Rational> = Poly::var(2, 0);
        let a = [q(1, 1), q(1, 1)];
        assert_eq!(x.pow(2).expect_dirichlet(&[&a]), q(1, 3));
    }
}
