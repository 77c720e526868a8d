//! Canonical bivariate rational functions in (n, h).
//!
//! Invariants: numerator and denominator are coprime, the denominator is
//! nonzero and its lexicographically leading coefficient (n over h) is 1,
//! and zero is 0/1. Equal functions therefore have identical
//! representations, which makes structural equality semantic.

use num_traits::{One, Signed, Zero};

use super::gcd::{bipoly_exact_div, bipoly_gcd};
use super::mpoly::{BiPoly, VAR_H, VAR_N};
use super::rational::{rat, Rat};
use super::ExactError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: BiPoly,
    den: BiPoly,
}

impl RatFunc {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: BiPoly, den: BiPoly) -> Self {
        if num.is_zero() {
            return Self { num, den: BiPoly::one() };
        }
        let g = bipoly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (bipoly_exact_div(&num, &g), bipoly_exact_div(&den, &g))
        };
        let lead = den.leading().expect("nonzero denominator").1.clone();
        if !lead.is_one() {
            let inv = Rat::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn from_poly(p: BiPoly) -> Self {
        Self { num: p, den: BiPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(BiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(BiPoly::constant(c))
    }

    pub fn var_n() -> Self {
        Self::from_poly(BiPoly::var(VAR_N))
    }

    pub fn var_h() -> Self {
        Self::from_poly(BiPoly::var(VAR_H))
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True iff the function does not involve n.
    pub fn is_free_of_n(&self) -> bool {
        self.num.degree_in(VAR_N).unwrap_or(0) == 0 && self.den.degree_in(VAR_N).unwrap_or(0) == 0
    }

    /// True iff the function does not involve h either (a constant).
    pub fn as_constant(&self) -> Option<Rat> {
        if self.num.total_degree().unwrap_or(0) == 0 && self.den.is_one() {
            Some(self.num.coeff(&[0, 0]))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::normalized(num, den)
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZeroFunction);
        }
        Ok(Self::normalized(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Substitution n -> n + delta.
    pub fn shift_n(&self, delta: i64) -> Self {
        self.shift_n_rat(&rat(delta))
    }

    /// Substitution n -> n + delta for a rational delta.
    pub fn shift_n_rat(&self, delta: &Rat) -> Self {
        use num_traits::Zero as _;
        if delta.is_zero() || self.is_zero() {
            return self.clone();
        }
        let image = BiPoly::var(VAR_N).add(&BiPoly::constant(delta.clone()));
        let images = [image, BiPoly::var(VAR_H)];
        // Coprimality and the monic-lex normalization survive n -> n + d,
        // so no re-normalization is needed; keep it for defensive scaling.
        Self::normalized(self.num.compose(&images), self.den.compose(&images))
    }

    /// Degree in n over the field Q(h), plus the leading coefficient
    /// (a rational function of h alone).
    pub fn degree_n(&self) -> Result<(i64, Self), ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroInput);
        }
        let dn = self.num.degree_in(VAR_N).unwrap_or(0);
        let dd = self.den.degree_in(VAR_N).unwrap_or(0);
        let lead_of = |p: &BiPoly, d: u32| {
            let mut out = BiPoly::zero();
            for (e, c) in p.terms() {
                if e[VAR_N] == d {
                    out.add_term([0, e[VAR_H]], c.clone());
                }
            }
            out
        };
        let leading = Self::normalized(lead_of(&self.num, dn), lead_of(&self.den, dd));
        Ok((dn as i64 - dd as i64, leading))
    }

    /// Exact evaluation; reports the point on a pole.
    pub fn eval(&self, n: &Rat, h: &Rat) -> Result<Rat, ExactError> {
        let point = [n.clone(), h.clone()];
        let d = self.den.eval(&point);
        if d.is_zero() {
            return Err(ExactError::Pole { n: n.clone(), h: h.clone() });
        }
        Ok(self.num.eval(&point) / d)
    }

    /// Substitutes an integer (or rational) value of n, leaving a canonical
    /// rational function of h alone. Errors if the denominator vanishes
    /// identically there.
    pub fn subst_n(&self, n0: &Rat) -> Result<Self, ExactError> {
        let sub = |p: &BiPoly| {
            let mut out = BiPoly::zero();
            for (e, c) in p.terms() {
                let mut k = c.clone();
                for _ in 0..e[VAR_N] {
                    k *= n0;
                }
                out.add_term([0, e[VAR_H]], k);
            }
            out
        };
        let den = sub(&self.den);
        if den.is_zero() {
            return Err(ExactError::DenominatorVanishesAt { var: "n", value: n0.clone() });
        }
        Ok(Self::normalized(sub(&self.num), den))
    }

    /// Substitutes a value of h, leaving a canonical rational function of n.
    pub fn subst_h(&self, h0: &Rat) -> Result<Self, ExactError> {
        let sub = |p: &BiPoly| {
            let mut out = BiPoly::zero();
            for (e, c) in p.terms() {
                let mut k = c.clone();
                for _ in 0..e[VAR_H] {
                    k *= h0;
                }
                out.add_term([e[VAR_N], 0], k);
            }
            out
        };
        let den = sub(&self.den);
        if den.is_zero() {
            return Err(ExactError::DenominatorVanishesAt { var: "h", value: h0.clone() });
        }
        Ok(Self::normalized(sub(&self.num), den))
    }

    /// For functions free of n: exact evaluation at h.
    pub fn eval_h_only(&self, h: &Rat) -> Result<Rat, ExactError> {
        debug_assert!(self.is_free_of_n());
        self.eval(&Rat::zero(), h)
    }

    /// Substitutes n = lam - h, producing a function rendered in (lam, h).
    /// Used to re-express diagonals in the spectral variable of e0.
    pub fn subst_n_lambda_minus_h(&self) -> Self {
        let image = BiPoly::var(VAR_N).sub(&BiPoly::var(VAR_H));
        let images = [image, BiPoly::var(VAR_H)];
        Self::normalized(self.num.compose(&images), self.den.compose(&images))
    }

    /// Canonical text form, e.g. `(2*h-1)/(n^2+4*n*h-n+4*h^2-2*h)`.
    pub fn render(&self) -> String {
        self.render_named("n", "h")
    }

    pub fn render_named(&self, n_name: &str, h_name: &str) -> String {
        let num = render_poly(&self.num, n_name, h_name);
        if self.den.is_one() {
            return num;
        }
        let den = render_poly(&self.den, n_name, h_name);
        // parenthesize only where precedence demands it
        let num = if self.num.num_terms() > 1 { format!("({})", num) } else { num };
        let den = if self.den.num_terms() > 1 || den.contains('*') {
            format!("({})", den)
        } else {
            den
        };
        format!("{}/{}", num, den)
    }
}

/// Renders a polynomial with terms in descending lexicographic order.
pub fn render_poly(p: &BiPoly, n_name: &str, h_name: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (e, c) in terms.into_iter().rev() {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || (e[VAR_N] == 0 && e[VAR_H] == 0) {
            factors.push(super::rational::render_rat(&mag));
        }
        for (v, name) in [(VAR_N, n_name), (VAR_H, h_name)] {
            match e[v] {
                0 => {}
                1 => factors.push(name.to_string()),
                k => factors.push(format!("{}^{}", name, k)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
