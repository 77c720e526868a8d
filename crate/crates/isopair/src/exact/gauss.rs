//! Gaussian rationals Q(i), the scalar field of the circle model.

use num_traits::Zero;

use super::rational::{rat, render_rat, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Self::new(rat(1), Rat::zero())
    }

    pub fn i() -> Self {
        Self::new(Rat::zero(), rat(1))
    }

    pub fn from_int(x: i64) -> Self {
        Self::new(rat(x), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Self::new(&self.re * rat(k), &self.im * rat(k))
    }

    /// Division; `o` must be nonzero.
    pub fn div(&self, o: &Self) -> Self {
        let norm = &o.re * &o.re + &o.im * &o.im;
        assert!(!norm.is_zero(), "division by zero Gaussian rational");
        let conj = Self::new(o.re.clone(), -o.im.clone());
        let p = self.mul(&conj);
        Self::new(p.re / &norm, p.im / &norm)
    }

    pub fn render(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => render_rat(&self.re),
            (true, false) => format!("{}*i", render_rat(&self.im)),
            (false, false) => {
                if self.im.is_negative_impl() {
                    format!("{}-{}*i", render_rat(&self.re), render_rat(&(-self.im.clone())))
                } else {
                    format!("{}+{}*i", render_rat(&self.re), render_rat(&self.im))
                }
            }
        }
    }
}

trait IsNegative {
    fn is_negative_impl(&self) -> bool;
}

impl IsNegative for Rat {
    fn is_negative_impl(&self) -> bool {
        use num_traits::Signed;
        self.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let i = GaussRat::i();
        assert_eq!(i.mul(&i), GaussRat::from_int(-1));
        let z = GaussRat::new(rat(3), rat(4));
        let w = z.div(&i); // (3+4i)/i = 4 - 3i
        assert_eq!(w, GaussRat::new(rat(4), rat(-3)));
        assert_eq!(z.mul(&w.div(&z)), w);
    }
}
