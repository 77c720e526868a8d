//! Sparse multivariate polynomials over the rationals.
//!
//! Exponent vectors are fixed-length arrays; the term order is
//! lexicographic in the variable order of the array (index 0 strongest).
//! No zero coefficients are ever stored, so structural equality is
//! semantic equality.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::{rat, Rat};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly<const D: usize> {
    terms: BTreeMap<[u32; D], Rat>,
}

impl<const D: usize> MPoly<D> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert([0; D], c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    /// The variable with index `v`.
    pub fn var(v: usize) -> Self {
        let mut exp = [0; D];
        exp[v] = 1;
        let mut p = Self::zero();
        p.terms.insert(exp, rat(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0; D]).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; D], &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32; D]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, exp: [u32; D], c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0; D];
                for v in 0..D {
                    e[v] = ea[v] + eb[v];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect() }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rat; D]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..D {
                for _ in 0..e[v] {
                    t *= &point[v];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    /// Substitutes a polynomial for each variable (general composition).
    pub fn compose(&self, images: &[Self; D]) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for v in 0..D {
                if e[v] > 0 {
                    t = t.mul(&images[v].pow(e[v]));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Swaps two variables in place.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2.swap(a, b);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Leading (lexicographically greatest) exponent and coefficient.
    pub fn leading(&self) -> Option<(&[u32; D], &Rat)> {
        self.terms.iter().next_back()
    }
}

pub type BiPoly = MPoly<2>;
pub type TriPoly = MPoly<3>;

/// Variable indices for the (n, h) bivariate ring used everywhere.
pub const VAR_N: usize = 0;
pub const VAR_H: usize = 1;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    #[test]
    fn arithmetic_and_eval() {
        let n = BiPoly::var(VAR_N);
        let h = BiPoly::var(VAR_H);
        // (n + 2h)(n - 2h) = n^2 - 4h^2
        let p = n.add(&h.scale(&rat(2))).mul(&n.sub(&h.scale(&rat(2))));
        assert_eq!(p.coeff(&[2, 0]), rat(1));
        assert_eq!(p.coeff(&[0, 2]), rat(-4));
        assert_eq!(p.coeff(&[1, 1]), rat(0));
        assert_eq!(p.eval(&[rat(3), ratio(1, 2)]), rat(8));
    }

    #[test]
    fn compose_substitutes() {
        let n = BiPoly::var(VAR_N);
        let p = n.mul(&n); // n^2
        // n -> n + 1
        let img = [n.add(&BiPoly::one()), BiPoly::var(VAR_H)];
        let q = p.compose(&img);
        assert_eq!(q.coeff(&[2, 0]), rat(1));
        assert_eq!(q.coeff(&[1, 0]), rat(2));
        assert_eq!(q.coeff(&[0, 0]), rat(1));
    }
}
