//! Arbitrary-precision rational scalars.
//!
//! `Rat` is the coefficient field for every exact computation in this
//! crate. The canonical-form invariants (coprime numerator/denominator,
//! positive denominator) are maintained by `BigRational` itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Nearest f64; exact rationals convert with at most one rounding.
pub fn rat_to_f64(r: &Rat) -> f64 {
    // num-rational's ToPrimitive is correctly rounded for BigRational.
    num_traits::ToPrimitive::to_f64(r).unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// True iff `r` is an integer `<= 0`.
pub fn is_nonpositive_integer(r: &Rat) -> bool {
    r.denom().is_one() && !r.numer().is_positive()
}

pub fn as_i64(r: &Rat) -> Option<i64> {
    if r.denom().is_one() {
        num_traits::ToPrimitive::to_i64(r.numer())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        for s in ["0", "-3", "3/4", "-7/2", "22"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(render_rat(&r), s);
        }
        assert_eq!(parse_rat("4/6").map(|r| render_rat(&r)).unwrap(), "2/3");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert!(is_nonpositive_integer(&rat(0)));
        assert!(is_nonpositive_integer(&rat(-5)));
        assert!(!is_nonpositive_integer(&rat(1)));
        assert!(!is_nonpositive_integer(&ratio(-1, 2)));
    }
}
