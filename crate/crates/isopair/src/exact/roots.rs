//! Rational roots of univariate polynomials, with multiplicity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rat;
use super::upoly::UPoly;
use super::ExactError;

/// All rational roots of `p` (rational-root theorem plus exact
/// evaluation), each repeated according to its multiplicity.
pub fn rational_roots(p: &UPoly) -> Result<Vec<Rat>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroInput);
    }
    // Clear denominators to a primitive integer polynomial.
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> =
        p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();

    // Factor out x^k: roots at 0 with multiplicity k.
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    for _ in 0..low {
        roots.push(Rat::zero());
    }
    let ints = &ints[low..];
    if ints.len() == 1 {
        roots.sort();
        return Ok(roots);
    }

    let a0 = ints[0].abs();
    let alead = ints.last().unwrap().abs();
    let mut candidates: Vec<Rat> = Vec::new();
    for p_div in divisors(&a0) {
        for q_div in divisors(&alead) {
            let r = Rat::new(p_div.clone(), q_div.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut poly = UPoly::new(ints.iter().map(|c| Rat::from_integer(c.clone())).collect());
    for cand in candidates {
        while poly.degree().is_some_and(|d| d >= 1) && poly.eval(&cand).is_zero() {
            let factor = UPoly::new(vec![-cand.clone(), Rat::one()]);
            let (q, r) = poly.divrem(&factor);
            debug_assert!(r.is_zero());
            poly = q;
            roots.push(cand.clone());
        }
    }
    roots.sort();
    Ok(roots)
}

/// Positive divisors of |x| (x nonzero).
fn divisors(x: &BigInt) -> Vec<BigInt> {
    let x = x.abs();
    debug_assert!(!x.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dsq = &d * &d;
        if dsq > x {
            break;
        }
        if (&x % &d).is_zero() {
            small.push(d.clone());
            let q = &x / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};

    fn p(cs: &[i64]) -> UPoly {
        UPoly::new(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn factored_input() {
        // (h-1)(2h-1) = 2h^2 - 3h + 1 -> {1, 1/2}
        let roots = rational_roots(&p(&[1, -3, 2])).unwrap();
        assert_eq!(roots, vec![ratio(1, 2), rat(1)]);
    }

    #[test]
    fn no_rational_roots() {
        // h^2 + 1
        assert!(rational_roots(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn quadratic_formula_case() {
        // 4h^2 - 8h + 3 -> {1/2, 3/2}
        let roots = rational_roots(&p(&[3, -8, 4])).unwrap();
        assert_eq!(roots, vec![ratio(1, 2), ratio(3, 2)]);
    }

    #[test]
    fn multiplicity_and_zero_roots() {
        // h^2 (h-1)^2 = h^4 - 2h^3 + h^2
        let roots = rational_roots(&p(&[0, 0, 1, -2, 1])).unwrap();
        assert_eq!(roots, vec![rat(0), rat(0), rat(1), rat(1)]);
        assert!(rational_roots(&UPoly::zero()).is_err());
    }
}
