//! Isotopic pairs as index-parameterized structure constants.
//!
//! A presentation carries two generator families indexed by Z and, for
//! each family, one bracket kind [x_i, x_j]_{a_k} whose coefficient is a
//! polynomial in (i, j, k) and whose target index is an affine form.
//! Antisymmetry in the bracketed slots is enforced at construction.

pub mod fourier;
pub mod verify;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{rat, Rat, TriPoly};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum IsoError {
    #[error("bracket coefficient is not antisymmetric in the bracketed slots")]
    NotAntisymmetric,
    #[error("target index form changes under swap of the bracketed slots")]
    TargetNotSymmetric,
    #[error("elements belong to the wrong family for this bracket")]
    FamilyMismatch,
    #[error("index {0} outside the family domain")]
    IndexOutsideDomain(i64),
    #[error("fields of different kinds cannot be combined")]
    KindMismatch,
}

/// Affine index form c_i*i + c_j*j + c_k*k + c0.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AffineIndex {
    pub ci: i64,
    pub cj: i64,
    pub ck: i64,
    pub c0: i64,
}

impl AffineIndex {
    pub fn eval(&self, i: i64, j: i64, k: i64) -> i64 {
        self.ci * i + self.cj * j + self.ck * k + self.c0
    }

    pub fn render(&self, vars: [&str; 3]) -> String {
        let mut out = String::new();
        for (c, v) in [(self.ci, vars[0]), (self.cj, vars[1]), (self.ck, vars[2])] {
            match c {
                0 => {}
                1 => {
                    if !out.is_empty() {
                        out.push('+');
                    }
                    out.push_str(v);
                }
                -1 => out.push_str(&format!("-{}", v)),
                c if c > 0 => {
                    if !out.is_empty() {
                        out.push('+');
                    }
                    out.push_str(&format!("{}*{}", c, v));
                }
                c => out.push_str(&format!("{}*{}", c, v)),
            }
        }
        if self.c0 != 0 || out.is_empty() {
            if self.c0 >= 0 && !out.is_empty() {
                out.push('+');
            }
            out.push_str(&self.c0.to_string());
        }
        out
    }
}

/// One bracket kind: [x_i, x_j]_{a_k} = coeff(i,j,k) * x_{target(i,j,k)},
/// where x ranges over `slot_family` and a over the other family.
#[derive(Clone, PartialEq, Debug)]
pub struct IsoBracket {
    pub slot_family: usize,
    pub coeff: TriPoly,
    pub target: AffineIndex,
}

impl IsoBracket {
    pub fn new(slot_family: usize, coeff: TriPoly, target: AffineIndex) -> Result<Self, IsoError> {
        // antisymmetry: coeff(i,j,k) = -coeff(j,i,k)
        let swapped = coeff.swap_vars(0, 1);
        if !coeff.add(&swapped).is_zero() {
            return Err(IsoError::NotAntisymmetric);
        }
        if target.ci != target.cj {
            return Err(IsoError::TargetNotSymmetric);
        }
        Ok(Self { slot_family, coeff, target })
    }

    pub fn coeff_at(&self, i: i64, j: i64, k: i64) -> Rat {
        self.coeff.eval(&[rat(i), rat(j), rat(k)])
    }
}

/// Per-family index window of a composite chart (conjunction of the
/// declared bounds).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct IndexWindow {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

impl IndexWindow {
    pub fn contains(&self, i: i64) -> bool {
        self.lower.is_none_or(|l| i >= l) && self.upper.is_none_or(|u| i <= u)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lower = match (self.lower, other.lower) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let upper = match (self.upper, other.upper) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self { lower, upper }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lower, self.upper), (Some(l), Some(u)) if l > u)
    }
}

/// A chart of an isotopic composite: one index window per family.
#[derive(Clone, PartialEq, Debug)]
pub struct CompositeChart {
    pub name: String,
    pub windows: [IndexWindow; 2],
}

impl CompositeChart {
    pub fn contains(&self, family: usize, index: i64) -> bool {
        self.windows[family].contains(index)
    }
}

/// Two families with their bracket kinds and optional charts.
#[derive(Clone, PartialEq, Debug)]
pub struct PairPresentation {
    pub name: String,
    pub family_names: [String; 2],
    /// brackets[f] has slot_family f, isotope family 1-f.
    pub brackets: [IsoBracket; 2],
    pub charts: Vec<CompositeChart>,
}

impl PairPresentation {
    /// The Witt isotopic pair with its two canonical charts.
    pub fn witt() -> Self {
        let i = TriPoly::var(0);
        let j = TriPoly::var(1);
        let coeff = i.sub(&j);
        let target = AffineIndex { ci: 1, cj: 1, ck: 1, c0: 0 };
        Self {
            name: "witt".into(),
            family_names: ["e".into(), "f".into()],
            brackets: [
                IsoBracket::new(0, coeff.clone(), target).expect("antisymmetric"),
                IsoBracket::new(1, coeff, target).expect("antisymmetric"),
            ],
            charts: vec![
                CompositeChart {
                    name: "one".into(),
                    windows: [
                        IndexWindow { lower: Some(-1), upper: None },
                        IndexWindow { lower: Some(0), upper: None },
                    ],
                },
                CompositeChart {
                    name: "two".into(),
                    windows: [
                        IndexWindow { lower: None, upper: Some(1) },
                        IndexWindow { lower: None, upper: Some(0) },
                    ],
                },
            ],
        }
    }

    pub fn family_index(&self, name: &str) -> Option<usize> {
        self.family_names.iter().position(|f| f == name)
    }

    pub fn bracket_for(&self, slot_family: usize) -> &IsoBracket {
        if self.brackets[0].slot_family == slot_family {
            &self.brackets[0]
        } else {
            &self.brackets[1]
        }
    }
}

/// Finite formal sum of generators of a single family.
#[derive(Clone, PartialEq, Debug)]
pub struct ElementCombo {
    pub family: usize,
    terms: BTreeMap<i64, Rat>,
}

impl ElementCombo {
    pub fn zero(family: usize) -> Self {
        Self { family, terms: BTreeMap::new() }
    }

    pub fn generator(family: usize, index: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index, rat(1));
        Self { family, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, index: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(index).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, IsoError> {
        if self.family != other.family {
            return Err(IsoError::FamilyMismatch);
        }
        let mut out = self.clone();
        for (&idx, c) in &other.terms {
            out.add_term(idx, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.family);
        }
        Self {
            family: self.family,
            terms: self.terms.iter().map(|(i, k)| (*i, k * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, IsoError> {
        self.add(&other.neg())
    }

    /// `2*e(3)-1/2*e(-1)` style rendering; `0` for the zero combo.
    pub fn render(&self, family_names: &[String; 2]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let name = &family_names[self.family];
        let mut out = String::new();
        for (idx, c) in &self.terms {
            use num_traits::{One, Signed};
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push(if c.is_negative() { '-' } else { '+' });
            }
            if !mag.is_one() {
                out.push_str(&crate::exact::render_rat(&mag));
                out.push('*');
            }
            out.push_str(&format!("{}({})", name, idx));
        }
        out
    }
}

/// Bilinear extension of the structure constants (isobracket).
pub fn isobracket(
    p: &PairPresentation,
    x: &ElementCombo,
    y: &ElementCombo,
    iso: &ElementCombo,
) -> Result<ElementCombo, IsoError> {
    if x.family != y.family || iso.family != 1 - x.family {
        return Err(IsoError::FamilyMismatch);
    }
    let bracket = p.bracket_for(x.family);
    let mut out = ElementCombo::zero(x.family);
    for (&i, ci) in &x.terms {
        for (&j, cj) in &y.terms {
            for (&k, ck) in &iso.terms {
                let c = bracket.coeff_at(i, j, k) * ci * cj * ck;
                out.add_term(bracket.target.eval(i, j, k), c);
            }
        }
    }
    Ok(out)
}

/// The same-family Witt algebra bracket [x_i, x_j] = (i-j) x_{i+j}
/// (the k = 0 fiber of the isocommutator; used by the r-matrix maps).
pub fn witt_algebra_bracket(x: &ElementCombo, y: &ElementCombo) -> Result<ElementCombo, IsoError> {
    if x.family != y.family {
        return Err(IsoError::FamilyMismatch);
    }
    let mut out = ElementCombo::zero(x.family);
    for (&i, ci) in &x.terms {
        for (&j, cj) in &y.terms {
            out.add_term(i + j, rat(i - j) * ci * cj);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_isobracket_values() {
        let p = PairPresentation::witt();
        let e = |i| ElementCombo::generator(0, i);
        let f = |i| ElementCombo::generator(1, i);
        // [e2, e1]_{f0} = e3
        let r = isobracket(&p, &e(2), &e(1), &f(0)).unwrap();
        assert_eq!(r, e(3));
        // [e_i, e_i]_{f_k} = 0
        assert!(isobracket(&p, &e(4), &e(4), &f(2)).unwrap().is_zero());
        // [f2, f0]_{e-1} = 2 f1
        let r = isobracket(&p, &f(2), &f(0), &e(-1)).unwrap();
        assert_eq!(r, f(1).scale(&rat(2)));
        // family mismatch is refused
        assert!(isobracket(&p, &e(1), &f(1), &f(0)).is_err());
    }

    #[test]
    fn k_zero_fiber_is_witt_algebra() {
        let p = PairPresentation::witt();
        let e = |i| ElementCombo::generator(0, i);
        let f0 = ElementCombo::generator(1, 0);
        for i in -5..=5 {
            for j in -5..=5 {
                let via_iso = isobracket(&p, &e(i), &e(j), &f0).unwrap();
                let via_witt = witt_algebra_bracket(&e(i), &e(j)).unwrap();
                assert_eq!(via_iso, via_witt);
            }
        }
    }

    #[test]
    fn antisymmetry_is_enforced() {
        // coefficient (i - 2j) is not antisymmetric
        let i = TriPoly::var(0);
        let j = TriPoly::var(1);
        let bad = i.sub(&j.scale(&rat(2)));
        let target = AffineIndex { ci: 1, cj: 1, ck: 1, c0: 0 };
        assert_eq!(IsoBracket::new(0, bad, target).unwrap_err(), IsoError::NotAntisymmetric);
        // asymmetric target form
        let good = i.sub(&j);
        let bad_target = AffineIndex { ci: 1, cj: 2, ck: 0, c0: 0 };
        assert_eq!(
            IsoBracket::new(0, good, bad_target).unwrap_err(),
            IsoError::TargetNotSymmetric
        );
    }

    #[test]
    fn combo_arithmetic_and_render() {
        let p = PairPresentation::witt();
        let mut c = ElementCombo::generator(0, 3).scale(&rat(2));
        c.add_term(-1, crate::exact::ratio(-1, 2));
        assert_eq!(c.render(&p.family_names), "-1/2*e(-1)+2*e(3)");
        let z = c.sub(&c.clone()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.render(&p.family_names), "0");
    }
}
